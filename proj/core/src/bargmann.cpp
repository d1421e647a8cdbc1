#include "magq/bargmann.hpp"

#include <cmath>
#include <random>

namespace magq {

BargmannSpace::BargmannSpace(VectorPotential A, FiducialVector v, PhaseGrid grid, int cap)
    : A_(std::move(A)), v_(std::move(v)), grid_(std::move(grid)) {
  require(grid_.phase_size() <= cap, "BargmannSpace: phase grid has " + std::to_string(grid_.phase_size()) +
                                         " points, above the cap of " + std::to_string(cap));
  const CoherentFrame frame(A_, v_, grid_);
  const double s = std::sqrt(grid_.cell_weight() * grid_.position().weight());
  U_ = s * frame.dense().adjoint();
  P_ = U_ * U_.adjoint();
}

CVec BargmannSpace::transform(const CVec& u) const {
  return (U_ * u) * std::sqrt(grid_.position().weight() / weight());
}

CVec BargmannSpace::adjoint(const CVec& Phi) const {
  return (U_.adjoint() * Phi) * std::sqrt(weight() / grid_.position().weight());
}

double BargmannSpace::phase_norm(const CVec& Phi) const { return std::sqrt(Phi.squaredNorm() * weight()); }

CVec BargmannSpace::reproduce(const CVec& Phi) const { return P_ * Phi; }

CVec BargmannSpace::phase_samples(const Symbol& f) const {
  const CMat S = f.sample(grid_, grid_.centers());
  CVec out(S.size());
  const Eigen::Index P = S.cols();
  for (Eigen::Index c = 0; c < S.rows(); ++c) out.segment(c * P, P) = S.row(c).transpose();
  return out;
}

CMat BargmannSpace::toeplitz(const Symbol& f) const {
  const CVec d = phase_samples(f);
  return P_ * d.asDiagonal() * P_;
}

CMat BargmannSpace::lift(const OperatorMatrix& T) const { return U_ * T.weighted() * U_.adjoint(); }

CVec BargmannSpace::covariant_symbol(const OperatorMatrix& T) const {
  require(T.size() == state_size(), "covariant_symbol: dimension mismatch");
  const CMat UT = U_ * T.weighted();
  CVec out(phase_size());
  for (int X = 0; X < phase_size(); ++X)
    out(X) = (UT.row(X).array() * U_.row(X).array().conjugate()).sum() / weight();
  return out;
}

CVec BargmannSpace::covariant_symbol(const CMat& S) const {
  require(S.rows() == phase_size() && S.cols() == phase_size(), "covariant_symbol: dimension mismatch");
  const CMat SP = S * P_;
  CVec out(phase_size());
  for (int X = 0; X < phase_size(); ++X) out(X) = (P_.row(X) * SP.col(X))(0) / weight();
  return out;
}

CVec BargmannSpace::berezin_transform(const Symbol& f) const {
  const CVec d = phase_samples(f);
  return (P_.cwiseAbs2() * d) / weight();
}

BargmannReport bargmann_check(const BargmannSpace& space, const Symbol& f, unsigned seed) {
  BargmannReport r;
  const int n = space.state_size();
  r.isometry = matrix_norm(space.U().adjoint() * space.U() - CMat::Identity(n, n)).value;
  const CMat& P = space.P();
  r.idempotent = matrix_norm(P * P - P).value;
  r.selfadjoint = matrix_norm(P - P.adjoint()).value;

  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 4; ++t) {
    CVec Phi(space.phase_size());
    for (Eigen::Index i = 0; i < Phi.size(); ++i) Phi(i) = cplx(nd(rng), nd(rng));
    Phi = P * Phi;
    r.reproducing = std::max(r.reproducing, (space.reproduce(Phi) - Phi).norm() / Phi.norm());
  }

  const PhaseGrid& g = space.grid();
  const OperatorMatrix B = berezin_op(space.potential(), space.fiducial(), g.hbar(), f, g);
  const CMat lifted = space.lift(B);
  r.toeplitz = matrix_norm(space.toeplitz(f) - lifted).value / std::max(operator_norm(B), 1e-300);
  return r;
}

}  // namespace magq
