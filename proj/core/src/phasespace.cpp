#include "magq/phasespace.hpp"

#include <cmath>

#include "magq/fft.hpp"

namespace magq {

BoxGrid::BoxGrid(int dim, double half_width, int points_per_axis)
    : dim_(dim), L_(half_width), M_(points_per_axis) {
  require(dim >= 1 && dim <= 3, "BoxGrid: dimension must be 1..3");
  require(half_width > 0.0, "BoxGrid: half width must be positive");
  require(points_per_axis >= 4 && points_per_axis % 2 == 0, "BoxGrid: M must be even and >= 4");
  h_ = 2.0 * L_ / M_;
  size_ = ipow(M_, dim_);
  weight_ = std::pow(h_, dim_);
  nodes_.reserve(static_cast<std::size_t>(size_));
  for (int f = 0; f < size_; ++f) nodes_.push_back(node(f));
}

Pt BoxGrid::node(int flat) const {
  int idx[3];
  unflatten(flat, dim_, M_, idx);
  Pt p(dim_);
  for (int d = 0; d < dim_; ++d) p(d) = axis_node(idx[d]);
  return p;
}

PhaseGrid::PhaseGrid(BoxGrid position, double hbar, int margin, double fiducial_width)
    : pos_(std::move(position)), hbar_(hbar) {
  require(hbar > 0.0 && hbar <= 1.0, "PhaseGrid: hbar must lie in (0,1]");
  const int n = pos_.dim();
  const int M = pos_.points_per_axis();
  const double h = pos_.spacing();
  const double L = pos_.half_width();
  if (margin < 0) margin = static_cast<int>(std::ceil(6.0 * std::sqrt(hbar) * fiducial_width / h));
  margin_ = margin;
  deta_ = kPi * hbar / L;
  dw_ = h / hbar;
  cell_volume_ = std::pow(h * deta_, n);
  cell_weight_ = cell_volume_ / std::pow(2.0 * kPi * hbar, n);
  const int total = pos_.size();
  momenta_.reserve(static_cast<std::size_t>(total));
  duals_.reserve(static_cast<std::size_t>(total));
  for (int f = 0; f < total; ++f) {
    momenta_.push_back(momentum(f));
    duals_.push_back(dual(f));
  }
  const int C = M + 2 * margin_;
  const int ctotal = ipow(C, n);
  int idx[3];
  for (int f = 0; f < ctotal; ++f) {
    unflatten(f, n, C, idx);
    Pt z(n);
    for (int d = 0; d < n; ++d) z(d) = -L + (idx[d] - margin_) * h;
    centers_.push_back(z);
  }
}

Pt PhaseGrid::momentum(int flat) const {
  int idx[3];
  unflatten(flat, dim(), M(), idx);
  Pt p(dim());
  for (int d = 0; d < dim(); ++d) p(d) = axis_momentum(idx[d]);
  return p;
}

Pt PhaseGrid::dual(int flat) const {
  int idx[3];
  unflatten(flat, dim(), M(), idx);
  Pt p(dim());
  for (int d = 0; d < dim(); ++d) p(d) = axis_dual(idx[d]);
  return p;
}

Symbol::Symbol(int dim, PhaseFn eval, std::string label)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)) {}

CMat Symbol::sample(const PhaseGrid& g, const std::vector<Pt>& xs) const {
  if (cache_ && &xs == &g.position().nodes() && cache_hbar_ == g.hbar() && cache_M_ == g.M() &&
      cache_L_ == g.position().half_width() &&
      cache_->rows() == static_cast<Eigen::Index>(xs.size()))
    return *cache_;
  if (sampler_) return sampler_(g, xs);
  const auto& eta = g.momenta();
  CMat s(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(eta.size()));
  for (std::size_t k = 0; k < eta.size(); ++k)
    for (std::size_t i = 0; i < xs.size(); ++i)
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = eval_(xs[i], eta[k]);
  return s;
}

Symbol& Symbol::cache(const PhaseGrid& g) {
  cache_.reset();
  cache_ = std::make_shared<const CMat>(sample(g));
  cache_hbar_ = g.hbar();
  cache_M_ = g.M();
  cache_L_ = g.position().half_width();
  return *this;
}

KernelFunction::KernelFunction(int dim, PhaseFn eval, std::string label)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)) {}

CMat KernelFunction::sample(const PhaseGrid& g, const std::vector<Pt>& xs) const {
  if (sampler_) return sampler_(g, xs);
  const auto& w = g.duals();
  CMat s(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(w.size()));
  for (std::size_t k = 0; k < w.size(); ++k)
    for (std::size_t i = 0; i < xs.size(); ++i)
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = eval_(xs[i], w[k]);
  return s;
}

namespace {

// Periodic cardinal function on M nodes with the Nyquist mode split evenly;
// t is measured in grid spacings.
void cardinal_weights(double x0, double spacing, int M, double x, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(M), 0.0);
  for (int m = 0; m < M; ++m) {
    const double t = (x - (x0 + m * spacing)) / spacing;
    double s = 1.0 + std::cos(kPi * t);
    for (int k = 1; k < M / 2; ++k) s += 2.0 * std::cos(2.0 * kPi * k * t / M);
    out[static_cast<std::size_t>(m)] = s / M;
  }
}

cplx interpolate(const CMat& s, const PhaseGrid& g, double second_x0, double second_dx, const Pt& x,
                 const Pt& y) {
  const int n = g.dim();
  const int M = g.M();
  const BoxGrid& b = g.position();
  std::vector<std::vector<double>> wx(static_cast<std::size_t>(n)), wy(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    cardinal_weights(-b.half_width(), b.spacing(), M, x(d), wx[static_cast<std::size_t>(d)]);
    cardinal_weights(second_x0, second_dx, M, y(d), wy[static_cast<std::size_t>(d)]);
  }
  const int total = b.size();
  std::vector<double> ax(static_cast<std::size_t>(total)), ay(static_cast<std::size_t>(total));
  int idx[3];
  for (int f = 0; f < total; ++f) {
    unflatten(f, n, M, idx);
    double px = 1.0, py = 1.0;
    for (int d = 0; d < n; ++d) {
      px *= wx[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[d])];
      py *= wy[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[d])];
    }
    ax[static_cast<std::size_t>(f)] = px;
    ay[static_cast<std::size_t>(f)] = py;
  }
  cplx acc = 0.0;
  for (int q = 0; q < total; ++q) {
    if (ay[static_cast<std::size_t>(q)] == 0.0) continue;
    cplx col = 0.0;
    for (int p = 0; p < total; ++p) col += ax[static_cast<std::size_t>(p)] * s(p, q);
    acc += col * ay[static_cast<std::size_t>(q)];
  }
  return acc;
}

}  // namespace

KernelFunction sampled_kernel(const PhaseGrid& g, CMat samples, std::string label) {
  auto s = std::make_shared<const CMat>(std::move(samples));
  const double w0 = g.axis_dual(0);
  const double dw = g.dual_spacing();
  KernelFunction k(
      g.dim(), [s, g, w0, dw](const Pt& x, const Pt& w) { return interpolate(*s, g, w0, dw, x, w); },
      std::move(label));
  k.with_sampler([s, g](const PhaseGrid& g2, const std::vector<Pt>& xs) {
    if (&xs == &g2.position().nodes() && g2.M() == g.M() && g2.hbar() == g.hbar()) return CMat(*s);
    const double w0 = g.axis_dual(0);
    CMat out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(g2.duals().size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t m = 0; m < g2.duals().size(); ++m)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
            interpolate(*s, g, w0, g.dual_spacing(), xs[i], g2.duals()[m]);
    return out;
  });
  return k;
}

Symbol sampled_symbol(const PhaseGrid& g, CMat samples, std::string label) {
  auto s = std::make_shared<const CMat>(std::move(samples));
  const double e0 = g.axis_momentum(0);
  const double de = g.momentum_spacing();
  Symbol f(
      g.dim(), [s, g, e0, de](const Pt& x, const Pt& xi) { return interpolate(*s, g, e0, de, x, xi); },
      std::move(label));
  f.with_sampler([s, g](const PhaseGrid& g2, const std::vector<Pt>& xs) {
    if (&xs == &g2.position().nodes() && g2.M() == g.M() && g2.hbar() == g.hbar()) return CMat(*s);
    CMat out(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(g2.momenta().size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t m = 0; m < g2.momenta().size(); ++m)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
            interpolate(*s, g, g.axis_momentum(0), g.momentum_spacing(), xs[i], g2.momenta()[m]);
    return out;
  });
  return f;
}

CMat partial_fourier_samples(const CMat& F, const PhaseGrid& g) {
  CMat out = F;
  centered_dft_rows(out, g.dim(), g.M(), +1);
  out *= std::pow(g.dual_spacing(), g.dim());
  return out;
}

CMat inverse_partial_fourier_samples(const CMat& f, const PhaseGrid& g) {
  CMat out = f;
  centered_dft_rows(out, g.dim(), g.M(), -1);
  out *= std::pow(g.momentum_spacing() / (2.0 * kPi), g.dim());
  return out;
}

Symbol partial_fourier(const KernelFunction& F, const PhaseGrid& g) {
  const double scale = std::pow(g.dual_spacing(), g.dim());
  Symbol f(
      g.dim(),
      [F, g, scale](const Pt& x, const Pt& eta) {
        cplx acc = 0.0;
        for (const Pt& w : g.duals()) acc += std::exp(kI * w.dot(eta)) * F(x, w);
        return acc * scale;
      },
      "F(" + F.label() + ")");
  f.with_sampler([F, g](const PhaseGrid& g2, const std::vector<Pt>& xs) {
    require(g2.M() == g.M() && g2.hbar() == g.hbar(), "partial_fourier: grid mismatch");
    return partial_fourier_samples(F.sample(g, xs), g);
  });
  return f;
}

KernelFunction inverse_partial_fourier(const Symbol& f, const PhaseGrid& g) {
  const double scale = std::pow(g.momentum_spacing() / (2.0 * kPi), g.dim());
  const double wmax = g.position().half_width() / g.hbar() * (1.0 + 1e-12);
  KernelFunction F(
      g.dim(),
      [f, g, scale, wmax](const Pt& x, const Pt& w) {
        for (Eigen::Index d = 0; d < w.size(); ++d)
          if (std::abs(w(d)) > wmax) return cplx(0.0);
        const std::vector<Pt> one{x};
        const CMat row = f.sample(g, one);
        cplx acc = 0.0;
        const auto& eta = g.momenta();
        for (std::size_t k = 0; k < eta.size(); ++k)
          acc += std::exp(-kI * w.dot(eta[k])) * row(0, static_cast<Eigen::Index>(k));
        return acc * scale;
      },
      "Finv(" + f.label() + ")");
  F.with_sampler([f, g](const PhaseGrid& g2, const std::vector<Pt>& xs) {
    require(g2.M() == g.M() && g2.hbar() == g.hbar(), "inverse_partial_fourier: grid mismatch");
    return inverse_partial_fourier_samples(f.sample(g, xs), g);
  });
  return F;
}

double norm_1_inf_samples(const CMat& F, const PhaseGrid& g) {
  const double dw = std::pow(g.dual_spacing(), g.dim());
  double s = 0.0;
  for (Eigen::Index m = 0; m < F.cols(); ++m) s += F.col(m).cwiseAbs().maxCoeff();
  return s * dw;
}

double norm_1_inf(const KernelFunction& F, const PhaseGrid& g) { return norm_1_inf_samples(F.sample(g), g); }

double spectral_gradient(const CMat& s, const PhaseGrid& g, std::vector<CMat>& dx, std::vector<CMat>& dxi) {
  const int n = g.dim();
  const int M = g.M();
  const int total = g.position().size();
  dx.assign(static_cast<std::size_t>(n), CMat());
  dxi.assign(static_cast<std::size_t>(n), CMat());
  auto wavenumber = [M](int k) { return (k < M / 2) ? k : (k == M / 2 ? 0 : k - M); };
  auto tail_of = [&](const CMat& hat) {
    double all = 0.0, tail = 0.0;
    int idx[3];
    for (int f = 0; f < total; ++f) {
      unflatten(f, n, M, idx);
      bool hi = false;
      for (int d = 0; d < n; ++d) hi = hi || std::abs(wavenumber(idx[d])) >= M / 4 || idx[d] == M / 2;
      const double e = hat.col(f).squaredNorm();
      all += e;
      if (hi) tail += e;
    }
    return all > 0.0 ? tail / all : 0.0;
  };
  auto derive = [&](const CMat& rows_hat, double period, std::vector<CMat>& out, bool transpose_back) {
    for (int j = 0; j < n; ++j) {
      CMat d = rows_hat;
      int idx[3];
      for (int f = 0; f < total; ++f) {
        unflatten(f, n, M, idx);
        d.col(f) *= kI * (2.0 * kPi * wavenumber(idx[j]) / period);
      }
      dft_rows(d, n, M, +1);
      d /= static_cast<double>(total);
      out[static_cast<std::size_t>(j)] = transpose_back ? CMat(d.transpose()) : d;
    }
  };
  // Momentum derivatives: transform along each row.
  CMat hat_xi = s;
  dft_rows(hat_xi, n, M, -1);
  const double tail_xi = tail_of(hat_xi);
  derive(hat_xi, M * g.momentum_spacing(), dxi, false);
  // Position derivatives: transform along columns.
  CMat hat_x = s.transpose();
  dft_rows(hat_x, n, M, -1);
  const double tail_x = tail_of(hat_x);
  derive(hat_x, 2.0 * g.position().half_width(), dx, true);
  return std::max(tail_x, tail_xi);
}

Symbol poisson_bracket(const MagneticField& B, const Symbol& f, const Symbol& g, const PhaseGrid& grid,
                       std::vector<std::string>* warnings) {
  const int n = f.dim();
  require(g.dim() == n && B.dim() == n, "poisson_bracket: dimension mismatch");
  const std::string label = "{" + f.label() + "," + g.label() + "}";
  if (f.has_gradient() && g.has_gradient()) {
    Symbol out(
        n,
        [B, f, g, n](const Pt& x, const Pt& xi) {
          CVec fx(n), fxi(n), gx(n), gxi(n);
          f.gradient(x, xi, fx, fxi);
          g.gradient(x, xi, gx, gxi);
          cplx s = 0.0;
          for (int j = 0; j < n; ++j) s += fx(j) * gxi(j) - fxi(j) * gx(j);
          if (!B.is_zero() && n > 1) {
            const BMat b = B(x);
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) s += b(j, k) * fxi(j) * gxi(k);
          }
          return s;
        },
        label);
    out.with_real(f.is_real() && g.is_real());
    return out;
  }
  std::vector<CMat> fx, fxi, gx, gxi;
  const double tf = spectral_gradient(f.sample(grid), grid, fx, fxi);
  const double tg = spectral_gradient(g.sample(grid), grid, gx, gxi);
  if (warnings && std::max(tf, tg) > 1e-8)
    warnings->push_back("poisson_bracket: spectral tail " + std::to_string(std::max(tf, tg)) +
                        " exceeds 1e-8 (aliasing)");
  const int P = grid.position().size();
  CMat out = CMat::Zero(P, grid.momentum_size());
  for (int j = 0; j < n; ++j)
    out += (fx[j].array() * gxi[j].array() - fxi[j].array() * gx[j].array()).matrix();
  if (!B.is_zero() && n > 1) {
    for (int p = 0; p < P; ++p) {
      const BMat b = B(grid.position().node(p));
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (b(j, k) != 0.0) out.row(p) += b(j, k) * (fxi[j].row(p).array() * gxi[k].row(p).array()).matrix();
    }
  }
  Symbol s = sampled_symbol(grid, std::move(out), label);
  s.with_real(f.is_real() && g.is_real());
  return s;
}

double symplectic_form(const MagneticField& B, const PhasePoint& X, const PhasePoint& Y, const PhasePoint& Z) {
  const int n = B.dim();
  require(X.x.size() == n && Y.x.size() == n && Z.x.size() == n && Y.xi.size() == n && Z.xi.size() == n,
          "symplectic_form: dimension mismatch");
  double s = Z.x.dot(Y.xi) - Y.x.dot(Z.xi);
  if (!B.is_zero() && n > 1) {
    const BMat b = B(X.x);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += b(j, k) * Y.x(j) * Z.x(k);
  }
  return s;
}

Symbol product(const Symbol& f, const Symbol& g) {
  Symbol out(f.dim(), [f, g](const Pt& x, const Pt& xi) { return f(x, xi) * g(x, xi); },
             f.label() + "*" + g.label());
  if (f.has_gradient() && g.has_gradient()) {
    const int n = f.dim();
    out.with_gradient([f, g, n](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
      CVec fx(n), fxi(n), hx(n), hxi(n);
      f.gradient(x, xi, fx, fxi);
      g.gradient(x, xi, hx, hxi);
      const cplx fv = f(x, xi), gv = g(x, xi);
      gx = fx * gv + fv * hx;
      gxi = fxi * gv + fv * hxi;
    });
  }
  out.with_sampler([f, g](const PhaseGrid& grid, const std::vector<Pt>& xs) {
    return CMat(f.sample(grid, xs).array() * g.sample(grid, xs).array());
  });
  out.with_real(f.is_real() && g.is_real());
  if (f.sup_hint() >= 0 && g.sup_hint() >= 0) out.with_sup(f.sup_hint() * g.sup_hint());
  return out;
}

Symbol linear_combination(cplx a, const Symbol& f, cplx b, const Symbol& g) {
  Symbol out(f.dim(), [a, b, f, g](const Pt& x, const Pt& xi) { return a * f(x, xi) + b * g(x, xi); },
             "lin(" + f.label() + "," + g.label() + ")");
  if (f.has_gradient() && g.has_gradient()) {
    const int n = f.dim();
    out.with_gradient([a, b, f, g, n](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
      CVec fx(n), fxi(n), hx(n), hxi(n);
      f.gradient(x, xi, fx, fxi);
      g.gradient(x, xi, hx, hxi);
      gx = a * fx + b * hx;
      gxi = a * fxi + b * hxi;
    });
  }
  out.with_sampler([a, b, f, g](const PhaseGrid& grid, const std::vector<Pt>& xs) {
    return CMat(a * f.sample(grid, xs) + b * g.sample(grid, xs));
  });
  out.with_real(f.is_real() && g.is_real() && a.imag() == 0.0 && b.imag() == 0.0);
  return out;
}

Symbol scaled(const Symbol& f, cplx c) {
  Symbol out(f.dim(), [c, f](const Pt& x, const Pt& xi) { return c * f(x, xi); }, f.label());
  if (f.has_gradient()) {
    out.with_gradient([c, f](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
      f.gradient(x, xi, gx, gxi);
      gx *= c;
      gxi *= c;
    });
  }
  out.with_sampler([c, f](const PhaseGrid& grid, const std::vector<Pt>& xs) { return CMat(c * f.sample(grid, xs)); });
  out.with_real(f.is_real() && c.imag() == 0.0);
  if (f.sup_hint() >= 0) out.with_sup(std::abs(c) * f.sup_hint());
  return out;
}

}  // namespace magq
