#include "magq/berezin.hpp"

#include <cmath>
#include <memory>

#include "magq/fft.hpp"

namespace magq {

FiducialVector FiducialVector::gaussian(int dim, double width) {
  FiducialVector f;
  f.dim = dim;
  f.width = width;
  f.parity = Parity::Even;
  f.name = width == 1.0 ? "gaussian" : "gaussian:" + std::to_string(width);
  const double c = std::pow(kPi * width * width, -0.25 * dim);
  const double a2 = width * width;
  f.v = [c, a2](const Pt& x) { return cplx(c * std::exp(-x.squaredNorm() / (2.0 * a2))); };
  f.grad = [c, a2](const Pt& x) {
    const double val = c * std::exp(-x.squaredNorm() / (2.0 * a2));
    return CVec((-val / a2) * x.cast<cplx>());
  };
  return f;
}

FiducialVector FiducialVector::odd_perturbed(int dim, double eps) {
  FiducialVector f;
  f.dim = dim;
  f.parity = eps == 0.0 ? Parity::Even : Parity::None;
  f.name = "odd_perturbed:" + std::to_string(eps);
  const double c = std::pow(kPi, -0.25 * dim) / std::sqrt(1.0 + 0.5 * eps * eps);
  f.v = [c, eps](const Pt& x) { return cplx(c * (1.0 + eps * x(0)) * std::exp(-0.5 * x.squaredNorm())); };
  f.grad = [c, eps](const Pt& x) {
    const double g = std::exp(-0.5 * x.squaredNorm());
    CVec out((-c * (1.0 + eps * x(0)) * g) * x.cast<cplx>());
    out(0) += c * eps * g;
    return out;
  };
  return f;
}

CVec FiducialVector::gradient(const Pt& x) const {
  if (grad) return grad(x);
  const double h = 1e-6;
  CVec g(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Pt xp = x, xm = x;
    xp(d) += h;
    xm(d) -= h;
    g(d) = (v(xp) - v(xm)) / (2.0 * h);
  }
  return g;
}

cplx FiducialVector::dilated(double hbar, const Pt& x) const {
  const double s = std::sqrt(hbar);
  return std::pow(hbar, -0.25 * dim) * v(Pt(x / s));
}

double FiducialVector::grid_norm(const BoxGrid& grid) const {
  double s = 0.0;
  for (const Pt& x : grid.nodes()) s += std::norm(v(x));
  return std::sqrt(s * grid.weight());
}

namespace {

double boundary_distance(const BoxGrid& grid, const Pt& z) {
  double d = 1e300;
  for (Eigen::Index k = 0; k < z.size(); ++k) d = std::min(d, grid.half_width() - std::abs(z(k)));
  return d;
}

// exp(i Gamma^A[c,x]/hbar) v_hbar(x - c) on the position grid.
CVec envelope_of(const VectorPotential& A, const FiducialVector& v, double hbar, const Pt& c, const BoxGrid& grid,
                 double cutoff = 0.0) {
  CVec a(grid.size());
  const double peak = std::pow(hbar, -0.25 * grid.dim()) * std::abs(v(Pt(Pt::Zero(grid.dim()))));
  for (int p = 0; p < grid.size(); ++p) {
    const Pt& x = grid.nodes()[static_cast<std::size_t>(p)];
    const cplx vv = v.dilated(hbar, Pt(x - c));
    if (std::abs(vv) <= cutoff * peak) {
      a(p) = 0.0;
      continue;
    }
    a(p) = std::exp(kI * (A.line_integral(c, x) / hbar)) * vv;
  }
  return a;
}

// Sum_x exp(-i (x - c/2).zeta_k / hbar) y(x) for every centred momentum index k.
CVec momentum_analysis(const CVec& y, const Pt& c, const PhaseGrid& g) {
  const int n = g.dim();
  const int M = g.M();
  const double L = g.position().half_width();
  CVec t = y;
  int idx[3];
  for (int f = 0; f < t.size(); ++f) {
    unflatten(f, n, M, idx);
    int s = 0;
    for (int d = 0; d < n; ++d) s += idx[d];
    if (s % 2) t(f) = -t(f);
  }
  dft_vector(t, n, M, -1);
  for (int k = 0; k < t.size(); ++k) {
    const Pt& zeta = g.momenta()[static_cast<std::size_t>(k)];
    double ph = 0.0;
    for (int d = 0; d < n; ++d) ph += (L + 0.5 * c(d)) * zeta(d);
    t(k) *= std::exp(kI * (ph / g.hbar()));
  }
  return t;
}

}  // namespace

CoherentState coherent_vector(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Z,
                              const BoxGrid& grid) {
  require(hbar > 0.0 && hbar <= 1.0, "coherent_vector: hbar must lie in (0,1]");
  require(Z.x.size() == grid.dim() && Z.xi.size() == grid.dim(), "coherent_vector: dimension mismatch");
  CoherentState s;
  s.samples = envelope_of(A, v, hbar, Z.x, grid);
  for (int p = 0; p < grid.size(); ++p) {
    const Pt& x = grid.nodes()[static_cast<std::size_t>(p)];
    s.samples(p) *= std::exp(kI * ((x - 0.5 * Z.x).dot(Z.xi) / hbar));
  }
  s.boundary_warning = boundary_distance(grid, Z.x) < 5.0 * std::sqrt(hbar) * v.width;
  return s;
}

cplx overlap_kernel(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Y,
                    const PhasePoint& Z, const BoxGrid& grid) {
  const CoherentState a = coherent_vector(A, v, hbar, Y, grid);
  const CoherentState b = coherent_vector(A, v, hbar, Z, grid);
  return inner(grid, a.samples, b.samples);
}

CoherentFrame::CoherentFrame(VectorPotential A, FiducialVector v, PhaseGrid grid)
    : A_(std::move(A)), v_(std::move(v)), grid_(std::move(grid)) {}

PhasePoint CoherentFrame::point(int column) const {
  const int P = grid_.momentum_size();
  return {grid_.centers()[static_cast<std::size_t>(column / P)], grid_.momenta()[static_cast<std::size_t>(column % P)]};
}

CVec CoherentFrame::envelope(int center) const {
  return envelope_of(A_, v_, grid_.hbar(), grid_.centers()[static_cast<std::size_t>(center)], grid_.position());
}

CMat CoherentFrame::block(int center) const {
  const CVec a = envelope(center);
  const Pt& c = grid_.centers()[static_cast<std::size_t>(center)];
  const BoxGrid& b = grid_.position();
  CMat V(b.size(), grid_.momentum_size());
  for (int k = 0; k < grid_.momentum_size(); ++k) {
    const Pt& zeta = grid_.momenta()[static_cast<std::size_t>(k)];
    for (int p = 0; p < b.size(); ++p)
      V(p, k) = std::exp(kI * ((b.nodes()[static_cast<std::size_t>(p)] - 0.5 * c).dot(zeta) / grid_.hbar())) * a(p);
  }
  return V;
}

CMat CoherentFrame::dense(std::size_t max_entries) const {
  const std::size_t entries = static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols());
  require(entries <= max_entries, "CoherentFrame::dense: frame too large");
  CMat V(rows(), cols());
  const int P = grid_.momentum_size();
  for (std::size_t c = 0; c < grid_.centers().size(); ++c)
    V.middleCols(static_cast<Eigen::Index>(c) * P, P) = block(static_cast<int>(c));
  return V;
}

OperatorMatrix CoherentFrame::gram(const CVec& values) const {
  const int P = grid_.momentum_size();
  const int R = rows();
  CMat K = CMat::Zero(R, R);
  for (std::size_t c = 0; c < grid_.centers().size(); ++c) {
    const CMat V = block(static_cast<int>(c));
    if (values.size() == 0) {
      K.noalias() += weight() * (V * V.adjoint());
    } else {
      const CVec d = weight() * values.segment(static_cast<Eigen::Index>(c) * P, P);
      K.noalias() += V * d.asDiagonal() * V.adjoint();
    }
  }
  return OperatorMatrix(grid_.position(), grid_.hbar(), std::move(K));
}

CVec CoherentFrame::analysis(const CVec& u) const {
  const BoxGrid& b = grid_.position();
  const int P = grid_.momentum_size();
  CVec out(cols());
  for (std::size_t c = 0; c < grid_.centers().size(); ++c) {
    const CVec a = envelope(static_cast<int>(c));
    const CVec y = (a.conjugate().array() * u.array()).matrix() * b.weight();
    out.segment(static_cast<Eigen::Index>(c) * P, P) = momentum_analysis(y, grid_.centers()[c], grid_);
  }
  return out;
}

HusimiResult husimi(const VectorPotential& A, const FiducialVector& v, double hbar, const CVec& u,
                    const PhaseGrid& grid) {
  require(hbar == grid.hbar(), "husimi: hbar differs from the phase grid");
  const CoherentFrame frame(A, v, grid);
  const CVec ov = frame.analysis(u);
  HusimiResult r;
  r.values = ov.cwiseAbs2() / std::pow(2.0 * kPi * hbar, grid.dim());
  r.mass = r.values.sum() * grid.cell_volume();
  // Leakage: mass of u within one fiducial width of the box edge.
  const BoxGrid& b = grid.position();
  double edge = 0.0, total = 0.0;
  for (int p = 0; p < b.size(); ++p) {
    const double m = std::norm(u(p));
    total += m;
    if (boundary_distance(b, b.nodes()[static_cast<std::size_t>(p)]) < 0.1 * b.half_width()) edge += m;
  }
  r.leakage_warning = total > 0.0 && edge / total > 1e-8;
  return r;
}

OperatorMatrix berezin_from_samples(const VectorPotential& A, const FiducialVector& v, double hbar,
                                    const CMat& center_samples, const PhaseGrid& grid) {
  const BoxGrid& b = grid.position();
  const int n = b.dim();
  const int M = b.points_per_axis();
  const int P = b.size();
  require(center_samples.rows() == static_cast<Eigen::Index>(grid.centers().size()) &&
              center_samples.cols() == grid.momentum_size(),
          "berezin_op: sample shape mismatch");
  // g_c(d) = w sum_k f(c, eta_k) exp(2 pi i d.k / M), d centred.
  CMat G = center_samples;
  centered_dft_rows(G, n, M, +1);
  G *= grid.cell_weight();
  // Differences of grid indices live in [-(M-1), M-1] per axis; on that extended box the flat
  // index is linear, so a pair (i, j) reads E[e_i - e_j + e_0] with no per-axis work.
  const int W = 2 * M - 1;
  const int ext = ipow(W, n);
  std::vector<int> e(static_cast<std::size_t>(P));
  int idx[3];
  for (int p = 0; p < P; ++p) {
    unflatten(p, n, M, idx);
    e[static_cast<std::size_t>(p)] = flat_index(idx, n, W);
  }
  for (int d = 0; d < n; ++d) idx[d] = M - 1;
  const int e0 = flat_index(idx, n, W);
  std::vector<int> wrap_col(static_cast<std::size_t>(ext));
  for (int t = 0; t < ext; ++t) {
    unflatten(t, n, W, idx);
    int col = 0;
    for (int d = 0; d < n; ++d) {
      int off = idx[d] - (M - 1);
      if (off >= M / 2) off -= M;
      if (off < -M / 2) off += M;
      col = col * M + (off + M / 2);
    }
    wrap_col[static_cast<std::size_t>(t)] = col;
  }
  CMat K = CMat::Zero(P, P);
  std::vector<int> support;
  std::vector<cplx> amp;
  std::vector<cplx> E(static_cast<std::size_t>(ext));
  for (std::size_t c = 0; c < grid.centers().size(); ++c) {
    const CVec row = G.row(static_cast<Eigen::Index>(c)).transpose();
    if (row.cwiseAbs().maxCoeff() == 0.0) continue;
    const CVec a = envelope_of(A, v, hbar, grid.centers()[c], b, 1e-10);
    support.clear();
    amp.clear();
    for (int p = 0; p < P; ++p)
      if (a(p) != 0.0) {
        support.push_back(p);
        amp.push_back(a(p));
      }
    for (int t = 0; t < ext; ++t) E[static_cast<std::size_t>(t)] = row(wrap_col[static_cast<std::size_t>(t)]);
    const std::size_t S = support.size();
    for (std::size_t jj = 0; jj < S; ++jj) {
      const int j = support[jj];
      const cplx* Ej = E.data() + e0 - e[static_cast<std::size_t>(j)];
      const cplx aj = std::conj(amp[jj]);
      cplx* Kj = K.col(j).data();
      // plain real arithmetic: std::complex products carry NaN recovery branches
      for (std::size_t ii = 0; ii < S; ++ii) {
        const int i = support[ii];
        const cplx g = Ej[e[static_cast<std::size_t>(i)]];
        const double tr = aj.real() * g.real() - aj.imag() * g.imag();
        const double ti = aj.real() * g.imag() + aj.imag() * g.real();
        const cplx ai = amp[ii];
        Kj[i] += cplx(ai.real() * tr - ai.imag() * ti, ai.real() * ti + ai.imag() * tr);
      }
    }
  }
  return OperatorMatrix(b, hbar, std::move(K));
}

OperatorMatrix berezin_op(const VectorPotential& A, const FiducialVector& v, double hbar, const Symbol& f,
                          const PhaseGrid& grid, BerezinDiagnostics* diag) {
  require(hbar == grid.hbar(), "berezin_op: hbar differs from the phase grid");
  const CMat S = f.sample(grid, grid.centers());
  if (diag) {
    const int C = grid.center_axis_count();
    const int m = grid.margin();
    double outer = 0.0, total = 0.0;
    int idx[3];
    for (std::size_t c = 0; c < grid.centers().size(); ++c) {
      unflatten(static_cast<int>(c), grid.dim(), C, idx);
      bool ring = false;
      for (int d = 0; d < grid.dim(); ++d) ring = ring || idx[d] < m || idx[d] >= C - m;
      const double e = S.row(static_cast<Eigen::Index>(c)).cwiseAbs().sum();
      total += e;
      if (ring) outer += e;
    }
    diag->leakage = total > 0.0 ? outer / total : 0.0;
    diag->leakage_warning = diag->leakage > 1e-8;
  }
  return berezin_from_samples(A, v, hbar, S, grid);
}

OperatorMatrix berezin_delta(const VectorPotential& A, const FiducialVector& v, double hbar, const PhasePoint& Z,
                             const BoxGrid& grid) {
  const CoherentState s = coherent_vector(A, v, hbar, Z, grid);
  CMat K = s.samples * s.samples.adjoint();
  K /= std::pow(2.0 * kPi * hbar, grid.dim());
  return OperatorMatrix(grid, hbar, std::move(K));
}

PExpectation berezin_p_expectation(const VectorPotential& A, const FiducialVector& v, double hbar, const CVec& u,
                                   int j, const BoxGrid& grid) {
  require(j >= 0 && j < grid.dim(), "berezin_p_expectation: axis out of range");
  const double w = grid.weight();
  const double sq = std::sqrt(hbar);
  const auto& nodes = grid.nodes();
  const double fd = 1e-5;
  PExpectation r;
  const double unorm2 = u.squaredNorm() * w;
  cplx t1 = 0.0;
  for (std::size_t yi = 0; yi < nodes.size(); ++yi) {
    const double vy = std::norm(v(nodes[yi]));
    if (vy < 1e-300) continue;
    for (std::size_t xi = 0; xi < nodes.size(); ++xi) {
      const double ux = std::norm(u(static_cast<Eigen::Index>(xi)));
      if (ux == 0.0) continue;
      const Pt& x = nodes[xi];
      const Pt wfix = x - sq * nodes[yi];
      Pt xp = x, xm = x;
      xp(j) += fd;
      xm(j) -= fd;
      const double d = (A.line_integral(xp, wfix) - A.line_integral(xm, wfix)) / (2.0 * fd);
      t1 += d * ux * vy;
    }
  }
  r.circulation_term = t1 * w * w;
  cplx t2 = 0.0;
  for (const Pt& y : nodes) t2 += v.gradient(y)(j) * std::conj(v(y));
  r.fiducial_term = kI * sq * unorm2 * t2 * w;
  const CVec du = spectral_derivative_matrix(j, grid).cast<cplx>() * u;
  r.derivative_term = kI * hbar * du.dot(u) * w;
  return r;
}

namespace {

cplx sigma_value(const MagneticField& B, const FiducialVector& v, double hbar, const PhaseGrid& g, const Pt& x,
                 const Pt& y, const std::function<cplx(std::size_t)>& Fc) {
  const Pt xr = x + 0.5 * hbar * y;
  const Pt xl = x - 0.5 * hbar * y;
  const double reach2 = std::pow(9.0 * std::sqrt(hbar) * v.width, 2);
  cplx acc = 0.0;
  const auto& cs = g.centers();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const Pt dl = xl - cs[c];
    const Pt dr = xr - cs[c];
    if (dl.squaredNorm() > reach2 || dr.squaredNorm() > reach2) continue;
    const cplx vv = std::conj(v.dilated(hbar, dr)) * v.dilated(hbar, dl);
    if (vv == 0.0) continue;
    const cplx fv = Fc(c);
    if (fv == 0.0) continue;
    acc += fv * vv * std::exp(-kI * (flux(B, cs[c], xr, xl) / hbar));
  }
  return acc * g.position().weight();
}

}  // namespace

KernelFunction sigma_map(const MagneticField& B, const FiducialVector& v, double hbar, const KernelFunction& F,
                         const PhaseGrid& grid) {
  require(hbar == grid.hbar(), "sigma_map: hbar differs from the phase grid");
  KernelFunction out(
      grid.dim(),
      [B, v, hbar, F, grid](const Pt& x, const Pt& y) {
        return sigma_value(B, v, hbar, grid, x, y, [&](std::size_t c) { return F(grid.centers()[c], y); });
      },
      "Sigma(" + F.label() + ")");
  out.with_sampler([B, v, hbar, F, grid](const PhaseGrid& g2, const std::vector<Pt>& xs) {
    require(g2.M() == grid.M() && g2.hbar() == grid.hbar(), "sigma_map: grid mismatch");
    const CMat Fs = F.sample(grid, grid.centers());
    CMat out(static_cast<Eigen::Index>(xs.size()), grid.momentum_size());
    for (int m = 0; m < grid.momentum_size(); ++m) {
      const Pt& y = grid.duals()[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < xs.size(); ++i)
        out(static_cast<Eigen::Index>(i), m) = sigma_value(
            B, v, hbar, grid, xs[i], y, [&](std::size_t c) { return Fs(static_cast<Eigen::Index>(c), m); });
    }
    return out;
  });
  return out;
}

Symbol ss_symbol(const MagneticField& B, const FiducialVector& v, double hbar, const Symbol& f,
                 const PhaseGrid& grid) {
  Symbol s = partial_fourier(sigma_map(B, v, hbar, inverse_partial_fourier(f, grid), grid), grid);
  s.with_real(false);
  return s;
}

OperatorMatrix gauge_conjugate(const OperatorMatrix& K, const GaugeFunction& rho) {
  const BoxGrid& g = K.grid();
  CVec d(g.size());
  for (int p = 0; p < g.size(); ++p) d(p) = std::exp(kI * (rho.rho(g.nodes()[static_cast<std::size_t>(p)]) / K.hbar()));
  CMat out = d.asDiagonal() * K.kernel() * d.conjugate().asDiagonal();
  return OperatorMatrix(g, K.hbar(), std::move(out));
}

double gauge_covariance_check(const VectorPotential& A, const GaugeFunction& rho, const FiducialVector& v,
                              double hbar, const Symbol& f, const PhaseGrid& grid) {
  const OperatorMatrix b0 = berezin_op(A, v, hbar, f, grid);
  const OperatorMatrix b1 = berezin_op(gauge_transform(A, rho), v, hbar, f, grid);
  return operator_norm(b1 - gauge_conjugate(b0, rho));
}

}  // namespace magq
