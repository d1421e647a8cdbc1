#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "magq/common.hpp"
#include "magq/fields.hpp"

namespace magq {

class BoxGrid {
public:
  BoxGrid(int dim, double half_width, int points_per_axis);

  int dim() const { return dim_; }
  double half_width() const { return L_; }
  int points_per_axis() const { return M_; }
  double spacing() const { return h_; }
  int size() const { return size_; }
  double weight() const { return weight_; }  // h^N
  double axis_node(int m) const { return -L_ + m * h_; }
  Pt node(int flat) const;
  const std::vector<Pt>& nodes() const { return nodes_; }

private:
  int dim_;
  double L_;
  int M_;
  double h_;
  int size_;
  double weight_;
  std::vector<Pt> nodes_;
};

// Phase-space grid: positions of a BoxGrid, momenta eta_k = (pi hbar / L) k for
// k in [-M/2, M/2), and coherent-state centres on the position grid extended by
// `margin` nodes on each side so boundary states are fully resolved.
class PhaseGrid {
public:
  PhaseGrid(BoxGrid position, double hbar, int margin = -1, double fiducial_width = 1.0);

  const BoxGrid& position() const { return pos_; }
  int dim() const { return pos_.dim(); }
  int M() const { return pos_.points_per_axis(); }
  double hbar() const { return hbar_; }
  int margin() const { return margin_; }
  double momentum_spacing() const { return deta_; }
  double dual_spacing() const { return dw_; }  // h / hbar
  double axis_momentum(int m) const { return (m - M() / 2) * deta_; }
  double axis_dual(int m) const { return (m - M() / 2) * dw_; }
  int momentum_size() const { return pos_.size(); }
  Pt momentum(int flat) const;
  Pt dual(int flat) const;
  const std::vector<Pt>& momenta() const { return momenta_; }
  const std::vector<Pt>& duals() const { return duals_; }
  const std::vector<Pt>& centers() const { return centers_; }
  int center_axis_count() const { return M() + 2 * margin_; }
  // Phase-space cell volume over (2 pi hbar)^N; equals M^{-N}.
  double cell_weight() const { return cell_weight_; }
  double cell_volume() const { return cell_volume_; }
  int phase_size() const { return static_cast<int>(centers_.size()) * momentum_size(); }

private:
  BoxGrid pos_;
  double hbar_;
  int margin_;
  double deta_;
  double dw_;
  double cell_weight_;
  double cell_volume_;
  std::vector<Pt> momenta_;
  std::vector<Pt> duals_;
  std::vector<Pt> centers_;
};

// Bulk sampler: rows follow `xs`, columns follow the centred momentum (or dual) grid.
using BulkSampler = std::function<CMat(const PhaseGrid&, const std::vector<Pt>&)>;
using PhaseFn = std::function<cplx(const Pt&, const Pt&)>;
// Writes d/dx into gx and d/dxi into gxi.
using PhaseGrad = std::function<void(const Pt&, const Pt&, CVec& gx, CVec& gxi)>;

class Symbol {
public:
  Symbol() = default;
  Symbol(int dim, PhaseFn eval, std::string label = "symbol");

  int dim() const { return dim_; }
  cplx operator()(const Pt& x, const Pt& xi) const { return eval_(x, xi); }
  const std::string& label() const { return label_; }

  Symbol& with_gradient(PhaseGrad g) { grad_ = std::move(g); return *this; }
  Symbol& with_sampler(BulkSampler s) { sampler_ = std::move(s); return *this; }
  Symbol& with_real(bool r) { real_ = r; return *this; }
  Symbol& with_sup(double s) { sup_ = s; return *this; }

  bool has_gradient() const { return static_cast<bool>(grad_); }
  void gradient(const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) const { grad_(x, xi, gx, gxi); }
  bool is_real() const { return real_; }
  double sup_hint() const { return sup_; }

  // Samples at xs x momentum grid.
  CMat sample(const PhaseGrid& g, const std::vector<Pt>& xs) const;
  CMat sample(const PhaseGrid& g) const { return sample(g, g.position().nodes()); }

  // Caches the samples on the position x momentum grid; cached values equal the evaluator.
  Symbol& cache(const PhaseGrid& g);
  const CMat* cached() const { return cache_.get(); }

  const PhaseFn& evaluator() const { return eval_; }

private:
  int dim_ = 0;
  PhaseFn eval_;
  PhaseGrad grad_;
  BulkSampler sampler_;
  std::string label_;
  bool real_ = false;
  double sup_ = -1.0;
  std::shared_ptr<const CMat> cache_;
  double cache_hbar_ = 0.0;
  int cache_M_ = 0;
  double cache_L_ = 0.0;
};

// Kernel F(x, w): first slot position, second slot the dual variable.
class KernelFunction {
public:
  KernelFunction() = default;
  KernelFunction(int dim, PhaseFn eval, std::string label = "kernel");

  int dim() const { return dim_; }
  cplx operator()(const Pt& x, const Pt& w) const { return eval_(x, w); }
  const std::string& label() const { return label_; }

  KernelFunction& with_sampler(BulkSampler s) { sampler_ = std::move(s); return *this; }
  KernelFunction& with_x_gradient(PhaseGrad g) { grad_ = std::move(g); return *this; }
  bool has_x_gradient() const { return static_cast<bool>(grad_); }
  void x_gradient(const Pt& x, const Pt& w, CVec& gx) const {
    CVec unused;
    grad_(x, w, gx, unused);
  }

  // Samples at xs x dual grid w_m = (m - M/2) h / hbar.
  CMat sample(const PhaseGrid& g, const std::vector<Pt>& xs) const;
  CMat sample(const PhaseGrid& g) const { return sample(g, g.position().nodes()); }

  const PhaseFn& evaluator() const { return eval_; }

private:
  int dim_ = 0;
  PhaseFn eval_;
  PhaseGrad grad_;
  BulkSampler sampler_;
  std::string label_;
};

// Kernel built from samples on the position x dual grid; evaluated off-grid by
// trigonometric interpolation in both slots.
KernelFunction sampled_kernel(const PhaseGrid& g, CMat samples, std::string label);
Symbol sampled_symbol(const PhaseGrid& g, CMat samples, std::string label);

// (F F)(x, eta) = int dw exp(i w.eta) F(x, w), discretized on the dual grid with the
// trapezoid rule over the symmetric range [-L/hbar, L/hbar].
Symbol partial_fourier(const KernelFunction& F, const PhaseGrid& g);
// (F^{-1} f)(x, w) = (2 pi)^{-N} int d eta exp(-i w.eta) f(x, eta); supported in |w_j| <= L/hbar.
KernelFunction inverse_partial_fourier(const Symbol& f, const PhaseGrid& g);

// Sample-level versions (rows: positions, columns: centred grid).
CMat partial_fourier_samples(const CMat& F, const PhaseGrid& g);
CMat inverse_partial_fourier_samples(const CMat& f, const PhaseGrid& g);

double norm_1_inf(const KernelFunction& F, const PhaseGrid& g);
double norm_1_inf_samples(const CMat& F, const PhaseGrid& g);

// {f,g}^B = sum_j (d_xj f d_xij g - d_xij f d_xj g) + sum_jk B_jk d_xij f d_xik g.
Symbol poisson_bracket(const MagneticField& B, const Symbol& f, const Symbol& g, const PhaseGrid& grid,
                       std::vector<std::string>* warnings = nullptr);

// Spectral gradient of samples on the position x momentum grid; fills dx[j], dxi[j].
// Returns the relative spectral tail energy (aliasing indicator).
double spectral_gradient(const CMat& s, const PhaseGrid& g, std::vector<CMat>& dx, std::vector<CMat>& dxi);

struct PhasePoint {
  Pt x;
  Pt xi;
};

double symplectic_form(const MagneticField& B, const PhasePoint& X, const PhasePoint& Y,
                       const PhasePoint& Z);

// Pointwise algebra that keeps analytic gradients when both factors carry them.
Symbol product(const Symbol& f, const Symbol& g);
Symbol linear_combination(cplx a, const Symbol& f, cplx b, const Symbol& g);
Symbol scaled(const Symbol& f, cplx c);

}  // namespace magq
