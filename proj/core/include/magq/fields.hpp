#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "magq/common.hpp"
#include "magq/quadrature.hpp"

namespace magq {

using BMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

class MagneticField {
public:
  using Eval = std::function<BMat(const Pt&)>;

  // Throws ContractViolation when antisymmetry fails at the probe points.
  MagneticField(int dim, Eval eval, std::string label = "custom",
                std::optional<double> derivative_bound_hint = std::nullopt);

  static MagneticField zero(int dim);
  static MagneticField constant(const BMat& b, std::string label = "constant");
  // N = 2 convenience: B_12(x) = f(x).
  static MagneticField planar(std::function<double(const Pt&)> b12, std::string label);

  int dim() const { return dim_; }
  BMat operator()(const Pt& x) const { return eval_(x); }
  double component(int j, int k, const Pt& x) const { return eval_(x)(j, k); }
  const std::optional<BMat>& constant_value() const { return constant_; }
  bool is_zero() const { return zero_; }
  const std::string& label() const { return label_; }
  std::optional<double> derivative_bound_hint() const { return hint_; }

private:
  int dim_;
  Eval eval_;
  std::string label_;
  std::optional<double> hint_;
  std::optional<BMat> constant_;
  bool zero_ = false;
};

class VectorPotential {
public:
  using Eval = std::function<Pt(const Pt&)>;
  using Circ = std::function<double(const Pt&, const Pt&)>;

  VectorPotential(int dim, Eval eval, std::string label = "custom", Circ exact_circulation = {});

  static VectorPotential zero(int dim);

  int dim() const { return dim_; }
  Pt operator()(const Pt& x) const { return eval_(x); }
  const std::string& label() const { return label_; }
  // Line integral along [x,y]: closed form when available, else the default segment rule.
  double line_integral(const Pt& x, const Pt& y) const;
  bool has_exact_circulation() const { return static_cast<bool>(exact_); }

private:
  int dim_;
  Eval eval_;
  std::string label_;
  Circ exact_;
};

struct GaugeFunction {
  std::function<double(const Pt&)> rho;
  std::function<Pt(const Pt&)> grad;
  std::string label = "custom";

  static GaugeFunction zero(int dim);
};

struct PotentialReport {
  double defect = 0.0;
  bool pass = false;
};

double flux_triangle(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c,
                     const SimplexRule& rule);
// Doubles the rule order from 16 until two successive values agree to tol.
double flux_triangle_adaptive(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c,
                              double tol = 1e-10);
// Closed form for constant fields, default rule otherwise.
double flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c);

double circulation(const VectorPotential& A, const Pt& x, const Pt& y, const SegmentRule& rule);

double pentagon_flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c, const Pt& d,
                     const Pt& e, const SimplexRule& rule);
double pentagon_flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c, const Pt& d,
                     const Pt& e);

VectorPotential gauge_transform(const VectorPotential& A, const GaugeFunction& rho);

VectorPotential poincare_potential(const MagneticField& B,
                                   const SegmentRule& rule = default_segment_rule());

PotentialReport verify_potential(const VectorPotential& A, const MagneticField& B,
                                 const std::vector<Pt>& probes, double tol);

// Gradient consistency of a gauge function against central differences.
double gauge_gradient_defect(const GaugeFunction& rho, const std::vector<Pt>& probes);

std::vector<Pt> default_probes(int dim, double radius, int count, unsigned seed);

}  // namespace magq
