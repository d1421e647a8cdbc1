#pragma once

#include <string>
#include <vector>

#include "magq/fields.hpp"
#include "magq/phasespace.hpp"

namespace magq {

// Dense kernel K(x_i, x_j); the operator acts as (Ku)(x_i) = sum_j K_ij u(x_j) h^N.
class OperatorMatrix {
public:
  OperatorMatrix(BoxGrid grid, double hbar, CMat kernel);

  static OperatorMatrix identity(const BoxGrid& grid, double hbar);
  static OperatorMatrix from_weighted(const BoxGrid& grid, double hbar, const CMat& weighted);

  const BoxGrid& grid() const { return grid_; }
  double hbar() const { return hbar_; }
  double weight() const { return grid_.weight(); }
  int size() const { return grid_.size(); }
  const CMat& kernel() const { return K_; }
  CMat& kernel() { return K_; }
  CMat weighted() const { return K_ * weight(); }
  CVec apply(const CVec& u) const { return K_ * u * weight(); }
  OperatorMatrix adjoint() const;
  bool all_finite() const { return K_.allFinite(); }

  OperatorMatrix operator*(const OperatorMatrix& o) const;
  OperatorMatrix operator+(const OperatorMatrix& o) const;
  OperatorMatrix operator-(const OperatorMatrix& o) const;
  OperatorMatrix scaled(cplx c) const;

private:
  BoxGrid grid_;
  double hbar_;
  CMat K_;
};

struct NormResult {
  double value = 0.0;
  std::string method;
  bool converged = true;
  int iterations = 0;
};

// Largest singular value of a matrix acting on orthonormal coordinates: dense eigen/SVD up to
// dense_limit, Lanczos above (on m^*m when m is not Hermitian), dense fallback if Lanczos stalls.
NormResult matrix_norm(const CMat& m, int dense_limit = 1024, double tol = 1e-12, int max_iter = 600);
// Operator norm of the weighted kernel (weighted L^2 inner product).
double operator_norm(const OperatorMatrix& K);
NormResult operator_norm_detailed(const OperatorMatrix& K, int dense_limit = 1024);

// Weighted inner product <u, v> = sum conj(u) v h^N.
cplx inner(const BoxGrid& g, const CVec& u, const CVec& v);
double norm(const BoxGrid& g, const CVec& u);

// Magnetic phase table exp(-(i/hbar) Gamma^A[x_i, x_j]).
CMat magnetic_phase_table(const VectorPotential& A, double hbar, const BoxGrid& grid);

OperatorMatrix rep_operator(const VectorPotential& A, double hbar, const KernelFunction& F, const BoxGrid& grid);

// FFT fast path; identical to rep_operator(A, hbar, inverse_partial_fourier(f), grid).
OperatorMatrix weyl_op(const VectorPotential& A, double hbar, const Symbol& f, const PhaseGrid& grid);

OperatorMatrix position_operator(double hbar, int j, const BoxGrid& grid);
// Real antisymmetric spectral derivative along axis j (Nyquist mode dropped), unweighted.
RMat spectral_derivative_matrix(int j, const BoxGrid& grid);
OperatorMatrix magnetic_momentum(const VectorPotential& A, double hbar, int j, const BoxGrid& grid);

struct CcrReport {
  double position_defect = 0.0;  // max ||(i[Pi_j,Q_k] - hbar delta_jk) u||
  double momentum_defect = 0.0;  // max ||(i[Pi_j,Pi_k] + hbar B_jk(Q)) u||
  int batch_size = 0;
};

// Interior Gaussian test batch: packets centred within `radius_fraction` of the box.
std::vector<CVec> interior_gaussian_batch(const BoxGrid& grid, double width, double radius_fraction,
                                          int count, unsigned seed);

CcrReport ccr_defect(const VectorPotential& A, const MagneticField& B, double hbar, const BoxGrid& grid,
                     const std::vector<CVec>& batch);
CcrReport ccr_defect(const VectorPotential& A, const MagneticField& B, double hbar, const BoxGrid& grid);

// (F <>_hbar G)(x, y): the z-integral runs over the position grid in the variable
// p = x - hbar y / 2 + hbar z, so Rep(F <> G) = Rep(F) Rep(G) holds at grid points.
KernelFunction twisted_conv(const MagneticField& B, double hbar, const KernelFunction& F, const KernelFunction& G,
                            const BoxGrid& grid);
// Relative change of one value when the quadrature grid is refined by two.
double twisted_conv_refinement(const MagneticField& B, double hbar, const KernelFunction& F,
                               const KernelFunction& G, const BoxGrid& grid, const Pt& x, const Pt& y);

Symbol moyal_product(const MagneticField& B, double hbar, const Symbol& f, const Symbol& g, const PhaseGrid& grid);

}  // namespace magq
