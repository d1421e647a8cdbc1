#pragma once

#include "magq/berezin.hpp"

namespace magq {

// Bargmann space realized as range(P) on the phase grid. All phase-grid matrices here
// act on orthonormal coordinates: Phi~(Y) = w^{1/2} Phi(Y), u~(x) = h^{N/2} u(x).
class BargmannSpace {
public:
  static constexpr int kDefaultCap = 4096;

  // Throws ContractViolation when the phase grid exceeds `cap` points.
  BargmannSpace(VectorPotential A, FiducialVector v, PhaseGrid grid, int cap = kDefaultCap);

  const PhaseGrid& grid() const { return grid_; }
  const VectorPotential& potential() const { return A_; }
  const FiducialVector& fiducial() const { return v_; }
  int phase_size() const { return static_cast<int>(U_.rows()); }
  int state_size() const { return static_cast<int>(U_.cols()); }
  double weight() const { return grid_.cell_weight(); }

  // U(Y, x) = w^{1/2} h^{N/2} conj(v_Y(x)); P = U U^*.
  const CMat& U() const { return U_; }
  const CMat& P() const { return P_; }
  // K(Y, Z) = <v_Y, v_Z>.
  cplx kernel(int Y, int Z) const { return P_(Y, Z) / weight(); }
  CMat kernel_matrix() const { return P_ / weight(); }

  // Phi(Y) = <v_Y, u>.
  CVec transform(const CVec& u) const;
  // sum_Y w Phi(Y) v_Y as position samples.
  CVec adjoint(const CVec& Phi) const;
  // ||Phi||^2 = sum_Y w |Phi(Y)|^2.
  double phase_norm(const CVec& Phi) const;
  // sum_Z w K(Y,Z) Phi(Z).
  CVec reproduce(const CVec& Phi) const;

  // Symbol samples at the phase points, centre-major.
  CVec phase_samples(const Symbol& f) const;
  // P diag(f) P.
  CMat toeplitz(const Symbol& f) const;
  // U B~ U^* for an operator in weighted form.
  CMat lift(const OperatorMatrix& T) const;

  // t(T)(X) = <v_X, T v_X>.
  CVec covariant_symbol(const OperatorMatrix& T) const;
  // s(S)(X) = <K(.,X), S K(.,X)> for S on orthonormal phase coordinates.
  CVec covariant_symbol(const CMat& S) const;
  // (Bf)(X) = sum_Y w f(Y) |K(X,Y)|^2.
  CVec berezin_transform(const Symbol& f) const;

private:
  VectorPotential A_;
  FiducialVector v_;
  PhaseGrid grid_;
  CMat U_;
  CMat P_;
};

struct BargmannReport {
  double isometry = 0.0;     // ||U^*U - Id||
  double idempotent = 0.0;   // ||P^2 - P||
  double selfadjoint = 0.0;  // ||P - P^*||
  double reproducing = 0.0;  // max relative defect of Phi = K Phi on random range vectors
  double toeplitz = 0.0;     // ||T(f) - U B(f) U^*|| / ||B(f)||
};

BargmannReport bargmann_check(const BargmannSpace& space, const Symbol& f, unsigned seed);

}  // namespace magq
