#include "magq/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "magq/fft.hpp"

namespace magq {

OperatorMatrix::OperatorMatrix(BoxGrid grid, double hbar, CMat kernel)
    : grid_(std::move(grid)), hbar_(hbar), K_(std::move(kernel)) {
  require(K_.rows() == grid_.size() && K_.cols() == grid_.size(), "OperatorMatrix: shape mismatch");
}

OperatorMatrix OperatorMatrix::identity(const BoxGrid& grid, double hbar) {
  return OperatorMatrix(grid, hbar, CMat::Identity(grid.size(), grid.size()) / grid.weight());
}

OperatorMatrix OperatorMatrix::from_weighted(const BoxGrid& grid, double hbar, const CMat& weighted) {
  return OperatorMatrix(grid, hbar, weighted / grid.weight());
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(grid_, hbar_, K_.adjoint()); }

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
  require(o.size() == size(), "OperatorMatrix: size mismatch");
  CMat p = K_ * o.K_;
  p *= weight();
  return OperatorMatrix(grid_, hbar_, std::move(p));
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
  require(o.size() == size(), "OperatorMatrix: size mismatch");
  return OperatorMatrix(grid_, hbar_, K_ + o.K_);
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const {
  require(o.size() == size(), "OperatorMatrix: size mismatch");
  return OperatorMatrix(grid_, hbar_, K_ - o.K_);
}

OperatorMatrix OperatorMatrix::scaled(cplx c) const { return OperatorMatrix(grid_, hbar_, K_ * c); }

namespace {

bool is_hermitian(const CMat& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale;
}

double dense_norm(const CMat& m) {
  if (m.rows() == m.cols() && is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

// Lanczos with full reorthogonalization for the largest |eigenvalue| of a Hermitian operator.
template <class Apply>
bool lanczos_extreme(const Apply& apply, Eigen::Index n, double tol, int max_iter, double& value, int& iters) {
  const int kmax = static_cast<int>(std::min<Eigen::Index>(n, max_iter));
  CMat Q(n, kmax);
  std::mt19937 rng(20240611u);
  std::normal_distribution<double> nd;
  CVec q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = cplx(nd(rng), nd(rng));
  q.normalize();
  std::vector<double> alpha, beta;
  double scale = 0.0;
  for (int k = 0; k < kmax; ++k) {
    Q.col(k) = q;
    CVec w = apply(q);
    alpha.push_back(std::real(q.dot(w)));
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();
    iters = k + 1;
    scale = std::max({scale, std::abs(alpha.back()), b});
    const bool invariant = b <= 1e-14 * scale;
    const bool exhausted = invariant || k + 1 == kmax;
    if ((k + 1) % 8 == 0 || exhausted) {
      RMat T = RMat::Zero(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<RMat> es(T);
      Eigen::Index arg;
      es.eigenvalues().cwiseAbs().maxCoeff(&arg);
      value = std::abs(es.eigenvalues()(arg));
      const double resid = b * std::abs(es.eigenvectors()(k, arg));
      if (invariant) return true;
      if (resid <= tol * std::max(value, 1e-300)) return true;
      if (exhausted) return false;
    }
    beta.push_back(b);
    q = w / b;
  }
  return false;
}

}  // namespace

NormResult matrix_norm(const CMat& m, int dense_limit, double tol, int max_iter) {
  NormResult r;
  if (m.size() == 0) return r;
  if (std::max(m.rows(), m.cols()) <= dense_limit) {
    r.value = dense_norm(m);
    r.method = "dense";
    return r;
  }
  const bool herm = m.rows() == m.cols() && is_hermitian(m);
  double value = 0.0;
  bool ok;
  if (herm) {
    ok = lanczos_extreme([&](const CVec& x) { return CVec(m * x); }, m.cols(), tol, std::min(max_iter, 600), value,
                         r.iterations);
    r.method = "lanczos";
  } else {
    ok = lanczos_extreme([&](const CVec& x) { return CVec(m.adjoint() * (m * x)); }, m.cols(), tol,
                         std::min(max_iter, 600), value, r.iterations);
    value = std::sqrt(value);
    r.method = "lanczos-normal";
  }
  if (ok) {
    r.value = value;
    return r;
  }
  r.converged = false;
  r.value = dense_norm(m);
  r.method = "dense-fallback";
  return r;
}

NormResult operator_norm_detailed(const OperatorMatrix& K, int dense_limit) {
  return matrix_norm(K.weighted(), dense_limit);
}

double operator_norm(const OperatorMatrix& K) { return operator_norm_detailed(K).value; }

cplx inner(const BoxGrid& g, const CVec& u, const CVec& v) { return u.dot(v) * g.weight(); }

double norm(const BoxGrid& g, const CVec& u) { return u.norm() * std::sqrt(g.weight()); }

CMat magnetic_phase_table(const VectorPotential& A, double hbar, const BoxGrid& grid) {
  const int P = grid.size();
  const auto& x = grid.nodes();
  CMat ph(P, P);
  for (int i = 0; i < P; ++i) {
    ph(i, i) = 1.0;
    for (int j = i + 1; j < P; ++j) {
      const double g = A.line_integral(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
      ph(i, j) = std::exp(-kI * (g / hbar));
      ph(j, i) = std::conj(ph(i, j));
    }
  }
  return ph;
}

OperatorMatrix rep_operator(const VectorPotential& A, double hbar, const KernelFunction& F, const BoxGrid& grid) {
  require(hbar > 0.0 && hbar <= 1.0, "rep_operator: hbar must lie in (0,1]");
  require(A.dim() == grid.dim() && F.dim() == grid.dim(), "rep_operator: dimension mismatch");
  const int P = grid.size();
  const auto& x = grid.nodes();
  const double pre = std::pow(hbar, -grid.dim());
  CMat K(P, P);
  for (int j = 0; j < P; ++j)
    for (int i = 0; i < P; ++i) {
      const Pt& xi = x[static_cast<std::size_t>(i)];
      const Pt& yj = x[static_cast<std::size_t>(j)];
      const cplx val = F(Pt(0.5 * (xi + yj)), Pt((yj - xi) / hbar));
      if (val == 0.0) {
        K(i, j) = 0.0;
        continue;
      }
      const double g = (i == j) ? 0.0 : A.line_integral(xi, yj);
      K(i, j) = pre * std::exp(-kI * (g / hbar)) * val;
    }
  return OperatorMatrix(grid, hbar, std::move(K));
}

OperatorMatrix weyl_op(const VectorPotential& A, double hbar, const Symbol& f, const PhaseGrid& grid) {
  require(hbar == grid.hbar(), "weyl_op: hbar differs from the phase grid");
  const BoxGrid& b = grid.position();
  const int n = b.dim();
  const int M = b.points_per_axis();
  const int S = 2 * M - 1;
  const int nmid = ipow(S, n);
  std::vector<Pt> mids;
  mids.reserve(static_cast<std::size_t>(nmid));
  int idx[3];
  for (int s = 0; s < nmid; ++s) {
    unflatten(s, n, S, idx);
    Pt m(n);
    for (int d = 0; d < n; ++d) m(d) = -b.half_width() + 0.5 * idx[d] * b.spacing();
    mids.push_back(m);
  }
  // Columns: dual offsets m' = j - i in [-M/2, M/2); rows: midpoints.
  const CMat F = inverse_partial_fourier_samples(f.sample(grid, mids), grid);
  const double pre = std::pow(hbar, -n);
  const int P = b.size();
  const auto& x = b.nodes();
  CMat K = CMat::Zero(P, P);
  int ii[3], jj[3], ss[3], mm[3];
  for (int j = 0; j < P; ++j) {
    unflatten(j, n, M, jj);
    for (int i = 0; i < P; ++i) {
      unflatten(i, n, M, ii);
      bool inside = true;
      for (int d = 0; d < n; ++d) {
        const int off = jj[d] - ii[d];
        if (std::abs(off) > M / 2) {
          inside = false;
          break;
        }
        ss[d] = ii[d] + jj[d];
        mm[d] = (off == M / 2) ? 0 : off + M / 2;
      }
      if (!inside) continue;
      const cplx val = F(flat_index(ss, n, S), flat_index(mm, n, M));
      if (val == 0.0) continue;
      const double g = (i == j) ? 0.0 : A.line_integral(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
      K(i, j) = pre * std::exp(-kI * (g / hbar)) * val;
    }
  }
  return OperatorMatrix(b, hbar, std::move(K));
}

OperatorMatrix position_operator(double hbar, int j, const BoxGrid& grid) {
  require(j >= 0 && j < grid.dim(), "position_operator: axis out of range");
  CMat K = CMat::Zero(grid.size(), grid.size());
  for (int p = 0; p < grid.size(); ++p) K(p, p) = grid.nodes()[static_cast<std::size_t>(p)](j) / grid.weight();
  return OperatorMatrix(grid, hbar, std::move(K));
}

RMat spectral_derivative_matrix(int j, const BoxGrid& grid) {
  const int n = grid.dim();
  const int M = grid.points_per_axis();
  const double L = grid.half_width();
  RMat d1(M, M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      double s = 0.0;
      for (int k = 1; k < M / 2; ++k) {
        const double kap = kPi * k / L;
        s += kap * std::sin(2.0 * kPi * k * (a - b) / M);
      }
      d1(a, b) = -2.0 * s / M;
    }
  const int P = grid.size();
  RMat D = RMat::Zero(P, P);
  int ia[3], ib[3];
  for (int a = 0; a < P; ++a) {
    unflatten(a, n, M, ia);
    for (int b = 0; b < P; ++b) {
      unflatten(b, n, M, ib);
      bool same = true;
      for (int d = 0; d < n; ++d)
        if (d != j && ia[d] != ib[d]) same = false;
      if (same) D(a, b) = d1(ia[j], ib[j]);
    }
  }
  return D;
}

OperatorMatrix magnetic_momentum(const VectorPotential& A, double hbar, int j, const BoxGrid& grid) {
  require(j >= 0 && j < grid.dim(), "magnetic_momentum: axis out of range");
  CMat W = (-kI * hbar) * spectral_derivative_matrix(j, grid).cast<cplx>();
  for (int p = 0; p < grid.size(); ++p) W(p, p) -= A(grid.nodes()[static_cast<std::size_t>(p)])(j);
  return OperatorMatrix::from_weighted(grid, hbar, W);
}

std::vector<CVec> interior_gaussian_batch(const BoxGrid& grid, double width, double radius_fraction, int count,
                                          unsigned seed) {
  std::mt19937_64 gen(seed);
  const double r = radius_fraction * grid.half_width();
  std::uniform_real_distribution<double> uc(-r, r);
  std::uniform_real_distribution<double> uk(-1.0, 1.0);
  std::vector<CVec> out;
  for (int c = 0; c < count; ++c) {
    Pt center(grid.dim()), kvec(grid.dim());
    for (int d = 0; d < grid.dim(); ++d) {
      center(d) = uc(gen);
      kvec(d) = uk(gen);
    }
    CVec u(grid.size());
    for (int p = 0; p < grid.size(); ++p) {
      const Pt& x = grid.nodes()[static_cast<std::size_t>(p)];
      const Pt dx = x - center;
      u(p) = std::exp(-dx.squaredNorm() / (2.0 * width * width)) * std::exp(kI * kvec.dot(x));
    }
    u /= norm(grid, u);
    out.push_back(u);
  }
  return out;
}

CcrReport ccr_defect(const VectorPotential& A, const MagneticField& B, double hbar, const BoxGrid& grid,
                     const std::vector<CVec>& batch) {
  const int n = grid.dim();
  std::vector<CMat> pi, q;
  for (int j = 0; j < n; ++j) {
    pi.push_back(magnetic_momentum(A, hbar, j, grid).weighted());
    q.push_back(position_operator(hbar, j, grid).weighted());
  }
  CcrReport rep;
  rep.batch_size = static_cast<int>(batch.size());
  for (const CVec& u : batch) {
    const double un = u.norm();
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        CVec c = kI * (pi[j] * (q[k] * u) - q[k] * (pi[j] * u));
        if (j == k) c -= hbar * u;
        rep.position_defect = std::max(rep.position_defect, c.norm() / un);
        CVec e = kI * (pi[j] * (pi[k] * u) - pi[k] * (pi[j] * u));
        for (int p = 0; p < grid.size(); ++p)
          e(p) += hbar * B(grid.nodes()[static_cast<std::size_t>(p)])(j, k) * u(p);
        rep.momentum_defect = std::max(rep.momentum_defect, e.norm() / un);
      }
  }
  return rep;
}

CcrReport ccr_defect(const VectorPotential& A, const MagneticField& B, double hbar, const BoxGrid& grid) {
  return ccr_defect(A, B, hbar, grid,
                    interior_gaussian_batch(grid, grid.half_width() / 8.0, 0.2, 6, 11u));
}

namespace {

cplx twisted_value(const MagneticField& B, double hbar, const KernelFunction& F, const KernelFunction& G,
                   const BoxGrid& grid, const Pt& x, const Pt& y) {
  const Pt xl = x - 0.5 * hbar * y;
  const Pt xr = x + 0.5 * hbar * y;
  const double pre = grid.weight() * std::pow(hbar, -grid.dim());
  cplx acc = 0.0;
  for (const Pt& p : grid.nodes()) {
    const cplx fv = F(Pt(0.5 * (xl + p)), Pt((p - xl) / hbar));
    if (fv == 0.0) continue;
    const cplx gv = G(Pt(0.5 * (p + xr)), Pt((xr - p) / hbar));
    if (gv == 0.0) continue;
    const double phi = flux(B, xl, p, xr);
    acc += std::exp(-kI * (phi / hbar)) * fv * gv;
  }
  return acc * pre;
}

}  // namespace

KernelFunction twisted_conv(const MagneticField& B, double hbar, const KernelFunction& F, const KernelFunction& G,
                            const BoxGrid& grid) {
  require(hbar > 0.0 && hbar <= 1.0, "twisted_conv: hbar must lie in (0,1]");
  require(F.dim() == grid.dim() && G.dim() == grid.dim() && B.dim() == grid.dim(),
          "twisted_conv: dimension mismatch");
  return KernelFunction(
      grid.dim(),
      [B, hbar, F, G, grid](const Pt& x, const Pt& y) { return twisted_value(B, hbar, F, G, grid, x, y); },
      F.label() + "<>" + G.label());
}

double twisted_conv_refinement(const MagneticField& B, double hbar, const KernelFunction& F,
                               const KernelFunction& G, const BoxGrid& grid, const Pt& x, const Pt& y) {
  const BoxGrid fine(grid.dim(), grid.half_width(), 2 * grid.points_per_axis());
  const cplx a = twisted_value(B, hbar, F, G, grid, x, y);
  const cplx b = twisted_value(B, hbar, F, G, fine, x, y);
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

Symbol moyal_product(const MagneticField& B, double hbar, const Symbol& f, const Symbol& g, const PhaseGrid& grid) {
  require(hbar == grid.hbar(), "moyal_product: hbar differs from the phase grid");
  const KernelFunction F = inverse_partial_fourier(f, grid);
  const KernelFunction G = inverse_partial_fourier(g, grid);
  Symbol out = partial_fourier(twisted_conv(B, hbar, F, G, grid.position()), grid);
  return out;
}

}  // namespace magq
