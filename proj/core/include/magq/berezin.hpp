#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magq/fields.hpp"
#include "magq/phasespace.hpp"
#include "magq/weyl.hpp"

namespace magq {

enum class Parity { Even, Odd, None };

struct FiducialVector {
  int dim = 1;
  std::function<cplx(const Pt&)> v;
  std::function<CVec(const Pt&)> grad;  // optional
  bool normalized = true;
  Parity parity = Parity::Even;
  double width = 1.0;  // decay scale, used to size coherent-centre margins
  std::string name = "gaussian";

  static FiducialVector gaussian(int dim, double width = 1.0);
  // Normalized (1 + eps x_1) exp(-|x|^2/2); breaks parity for eps != 0.
  static FiducialVector odd_perturbed(int dim, double eps);

  cplx operator()(const Pt& x) const { return v(x); }
  CVec gradient(const Pt& x) const;
  // v_hbar(x) = hbar^{-N/4} v(x / sqrt(hbar))
  cplx dilated(double hbar, const Pt& x) const;
  // L^2 norm on a grid fine enough to resolve the fiducial.
  double grid_norm(const BoxGrid& grid) const;
};

struct CoherentState {
  CVec samples;
  bool boundary_warning = false;
};

// v^A_hbar(Z)(x) = exp(i (x - z/2).zeta / hbar) exp(i Gamma^A[z,x] / hbar) v_hbar(x - z)
CoherentState coherent_vector(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Z,
                              const BoxGrid& grid);
cplx overlap_kernel(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Y,
                    const PhasePoint& Z, const BoxGrid& grid);

// Frame of magnetic coherent vectors indexed by (centre, momentum); built block by block.
class CoherentFrame {
public:
  CoherentFrame(VectorPotential A, FiducialVector v, PhaseGrid grid);

  const PhaseGrid& grid() const { return grid_; }
  int rows() const { return grid_.position().size(); }
  int cols() const { return grid_.phase_size(); }
  double weight() const { return grid_.cell_weight(); }
  PhasePoint point(int column) const;
  // exp(i Gamma^A[c,x]/hbar) v_hbar(x - c) for all positions x.
  CVec envelope(int center) const;
  // Columns of one centre: M^N x M^N.
  CMat block(int center) const;
  // Full frame matrix V; refuses above max_entries.
  CMat dense(std::size_t max_entries = 50'000'000) const;
  // V diag(w * values) V^*, streamed over centres; values indexed like columns (empty = all ones).
  OperatorMatrix gram(const CVec& values = CVec()) const;
  // <v_Z, u> for every column Z.
  CVec analysis(const CVec& u) const;

private:
  VectorPotential A_;
  FiducialVector v_;
  PhaseGrid grid_;
};

struct HusimiResult {
  RVec values;  // indexed like frame columns: centre-major, centred momentum minor
  double mass = 0.0;
  bool leakage_warning = false;
};

HusimiResult husimi(const VectorPotential& A, const FiducialVector& v, double hbar, const CVec& u,
                    const PhaseGrid& grid);

struct BerezinDiagnostics {
  double leakage = 0.0;  // symbol mass on the outer margin ring relative to total
  bool leakage_warning = false;
};

// Structured assembly of V diag(w f) V^*: for each centre the momentum sum is a DFT,
// leaving K(x,x') = sum_c a_c(x) conj(a_c(x')) g_c(x - x').
OperatorMatrix berezin_op(const VectorPotential& A, const FiducialVector& v, double hbar, const Symbol& f,
                          const PhaseGrid& grid, BerezinDiagnostics* diag = nullptr);
OperatorMatrix berezin_from_samples(const VectorPotential& A, const FiducialVector& v, double hbar,
                                    const CMat& center_samples, const PhaseGrid& grid);

OperatorMatrix berezin_delta(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Z,
                             const BoxGrid& grid);

struct PExpectation {
  cplx circulation_term;
  cplx fiducial_term;
  cplx derivative_term;
  cplx total() const { return circulation_term + fiducial_term + derivative_term; }
};

// Three-term formula for <u, B(p_j) u>; the circulation term differentiates Gamma^A[x, w]
// in its first slot with w = x - sqrt(hbar) y held fixed.
PExpectation berezin_p_expectation(const VectorPotential& A, const FiducialVector& v, double hbar, const CVec& u,
                                   int j, const BoxGrid& grid);

// [Sigma F](x,y) = int dc F(c,y) conj(v_hbar(x'-c)) v_hbar(x''-c) exp(-(i/hbar) Gamma^B<c,x',x''>),
// x' = x + hbar y/2, x'' = x - hbar y/2, the c-integral running over the coherent centres.
KernelFunction sigma_map(const MagneticField& B, const FiducialVector& v, double hbar, const KernelFunction& F,
                         const PhaseGrid& grid);
Symbol ss_symbol(const MagneticField& B, const FiducialVector& v, double hbar, const Symbol& f,
                 const PhaseGrid& grid);

// U K U^* with U = diag(exp(i rho(x)/hbar)).
OperatorMatrix gauge_conjugate(const OperatorMatrix& K, const GaugeFunction& rho);

double gauge_covariance_check(const VectorPotential& A, const GaugeFunction& rho, const FiducialVector& v,
                              double hbar, const Symbol& f, const PhaseGrid& grid);

}  // namespace magq
