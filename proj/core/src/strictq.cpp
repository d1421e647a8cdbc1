#include "magq/strictq.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "magq/fft.hpp"

namespace magq {

namespace {

// Linear convolution along the dual axes of every row, zero padding to 2M per axis.
CMat convolve_rows(const CMat& F, const CMat& G, int n, int M) {
  const int M2 = 2 * M;
  const int big = ipow(M2, n);
  const Eigen::Index R = F.rows();
  CMat a = CMat::Zero(R, big), b = CMat::Zero(R, big);
  int idx[3];
  for (int f = 0; f < F.cols(); ++f) {
    unflatten(f, n, M, idx);
    const int t = flat_index(idx, n, M2);
    a.col(t) = F.col(f);
    b.col(t) = G.col(f);
  }
  dft_rows(a, n, M2, -1);
  dft_rows(b, n, M2, -1);
  a = a.cwiseProduct(b);
  dft_rows(a, n, M2, +1);
  a /= static_cast<double>(big);
  CMat out(R, F.cols());
  for (int f = 0; f < F.cols(); ++f) {
    unflatten(f, n, M, idx);
    for (int d = 0; d < n; ++d) idx[d] += M / 2;
    out.col(f) = a.col(flat_index(idx, n, M2));
  }
  return out;
}

}  // namespace

CMat classical_product_samples(const CMat& F, const CMat& G, const PhaseGrid& grid) {
  require(F.rows() == G.rows() && F.cols() == grid.momentum_size() && G.cols() == grid.momentum_size(),
          "classical_product: sample shape mismatch");
  return convolve_rows(F, G, grid.dim(), grid.M()) * std::pow(grid.dual_spacing(), grid.dim());
}

KernelFunction classical_product(const KernelFunction& F, const KernelFunction& G, const PhaseGrid& grid) {
  const double dv = std::pow(grid.dual_spacing(), grid.dim());
  KernelFunction out(
      grid.dim(),
      [F, G, grid, dv](const Pt& x, const Pt& y) {
        cplx acc = 0.0;
        for (const Pt& z : grid.duals()) {
          const cplx fz = F(x, z);
          if (fz != 0.0) acc += fz * G(x, Pt(y - z));
        }
        return acc * dv;
      },
      "(" + F.label() + ")<>0(" + G.label() + ")");
  out.with_sampler([F, G, grid](const PhaseGrid& g, const std::vector<Pt>& xs) {
    require(g.M() == grid.M() && g.hbar() == grid.hbar(), "classical_product: grid mismatch");
    return classical_product_samples(F.sample(grid, xs), G.sample(grid, xs), grid);
  });
  return out;
}

KernelFunction kernel_bracket(const MagneticField& B, const KernelFunction& F, const KernelFunction& G,
                              const PhaseGrid& grid, std::vector<std::string>* warnings) {
  const int n = grid.dim();
  const CMat Fs = F.sample(grid);
  const CMat Gs = G.sample(grid);
  std::vector<CMat> Fx, Gx, unused;
  const double tail = std::max(spectral_gradient(Fs, grid, Fx, unused), spectral_gradient(Gs, grid, Gx, unused));
  if (warnings && tail > 1e-8)
    warnings->push_back("kernel_bracket: spectral tail " + std::to_string(tail) + " exceeds 1e-8 (aliasing)");
  std::vector<CMat> YF(static_cast<std::size_t>(n)), YG(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    RVec w(grid.momentum_size());
    for (int m = 0; m < w.size(); ++m) w(m) = grid.duals()[static_cast<std::size_t>(m)](j);
    YF[static_cast<std::size_t>(j)] = Fs * w.asDiagonal();
    YG[static_cast<std::size_t>(j)] = Gs * w.asDiagonal();
  }
  const BoxGrid& pos = grid.position();
  CMat out = CMat::Zero(pos.size(), grid.momentum_size());
  for (int j = 0; j < n; ++j) {
    const auto J = static_cast<std::size_t>(j);
    out += classical_product_samples(YF[J], CMat(-kI * Gx[J]), grid);
    out -= classical_product_samples(CMat(-kI * Fx[J]), YG[J], grid);
  }
  if (!B.is_zero() && n > 1) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        CMat c = classical_product_samples(YF[static_cast<std::size_t>(j)], YG[static_cast<std::size_t>(k)], grid);
        for (int p = 0; p < pos.size(); ++p) out.row(p) -= B.component(j, k, pos.node(p)) * c.row(p);
      }
  }
  return sampled_kernel(grid, std::move(out), "{{" + F.label() + "," + G.label() + "}}");
}

namespace {

std::vector<Pt> pentagon(int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a, const Pt& b, double hbar) {
  const double s = std::sqrt(hbar);
  const double h2 = 0.5 * hbar;
  if (which == 1)
    return {x - h2 * y, x - s * a - h2 * (y - z), x - h2 * y + hbar * z, x - s * b + h2 * z, x + h2 * y};
  return {x - h2 * y, x - s * b - h2 * z, x + h2 * y - hbar * z, x - s * a + h2 * (y - z), x + h2 * y};
}

double pentagon_phase(const MagneticField& B, int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a,
                      const Pt& b, double hbar, const SimplexRule& rule) {
  require(which == 1 || which == 2, "phase_w: which must be 1 or 2");
  const auto p = pentagon(which, x, y, z, a, b, hbar);
  return pentagon_flux(B, p[0], p[1], p[2], p[3], p[4], rule);
}

}  // namespace

cplx phase_w(const MagneticField& B, int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a, const Pt& b,
             double hbar, const SimplexRule& rule) {
  require(hbar > 0.0 && hbar <= 1.0, "phase_w: hbar must lie in (0,1]");
  return std::exp(-kI * (pentagon_phase(B, which, x, y, z, a, b, hbar, rule) / hbar));
}

cplx phase_w(const MagneticField& B, int which, const Pt& x, const Pt& y, const Pt& z, const Pt& a, const Pt& b,
             double hbar) {
  return phase_w(B, which, x, y, z, a, b, hbar, default_simplex_rule());
}

cplx richardson_sqrt(const std::vector<cplx>& values) {
  require(!values.empty(), "richardson_sqrt: empty sequence");
  std::vector<cplx> col = values;
  const int levels = std::min<int>(3, static_cast<int>(values.size()) - 1);
  for (int l = 1; l <= levels; ++l) {
    const double r = std::pow(2.0, 0.5 * l);
    std::vector<cplx> next;
    for (std::size_t i = 0; i + 1 < col.size(); ++i) next.push_back((r * col[i + 1] - col[i]) / (r - 1.0));
    col = std::move(next);
  }
  return col.back();
}

PhaseLemmaReport phase_lemma_check(const MagneticField& B, const Pt& x, const Pt& y, const Pt& z, const Pt& a,
                                   const Pt& b, const std::vector<double>& hbar_list, double tol) {
  require(hbar_list.size() >= 2, "phase_lemma_check: need at least two hbar values");
  for (std::size_t i = 1; i < hbar_list.size(); ++i)
    require(std::abs(hbar_list[i - 1] / hbar_list[i] - 2.0) < 1e-12, "phase_lemma_check: hbar list must halve");
  PhaseLemmaReport r;
  r.hbar_list = hbar_list;
  const SimplexRule& rule = default_simplex_rule();
  for (double h : hbar_list) {
    const double g1 = pentagon_phase(B, 1, x, y, z, a, b, h, rule);
    const double g2 = pentagon_phase(B, 2, x, y, z, a, b, h, rule);
    // w1 - w2 = -2i sin((g1 - g2) / 2h) exp(-i (g1 + g2) / 2h), free of cancellation
    const cplx diff = -2.0 * kI * std::sin((g1 - g2) / (2.0 * h)) * std::exp(-kI * ((g1 + g2) / (2.0 * h)));
    r.values.push_back(diff / (kI * h));
  }
  r.limit = richardson_sqrt(r.values);
  const BMat bx = B(x);
  const int n = B.dim();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) r.target -= z(j) * (y(k) - z(k)) * bx(j, k);
  r.error = std::abs(r.limit - r.target);
  r.pass = r.error <= tol;
  return r;
}

GridPolicy scaled_grid_policy(int dim, double L, double m_times_hbar, int m_min, double fiducial_width) {
  return [=](double hbar) {
    int M = static_cast<int>(std::ceil(m_times_hbar / hbar - 1e-9));
    M = std::max(M + (M % 2), m_min);
    return PhaseGrid(BoxGrid(dim, L, M), hbar, -1, fiducial_width);
  };
}

GridPolicy sqrt_box_policy(int dim, double l_times_sqrt_hbar, int M, double fiducial_width) {
  return [=](double hbar) {
    return PhaseGrid(BoxGrid(dim, l_times_sqrt_hbar * std::sqrt(hbar), M), hbar, -1, fiducial_width);
  };
}

std::string grid_summary(const PhaseGrid& g) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "N=%d M=%d L=%.6g margin=%d centres=%zu", g.dim(), g.M(),
                g.position().half_width(), g.margin(), g.centers().size());
  return buf;
}

bool verdict_strictly_decreasing(const std::vector<SweepRecord>& r, double final_ratio) {
  if (r.size() < 2) return false;
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i].defect < r[i - 1].defect)) return false;
  return r.back().defect <= final_ratio * r.front().defect;
}

bool verdict_rieffel(const std::vector<SweepRecord>& r, double sup, double band) {
  if (r.size() < 2) return false;
  for (std::size_t i = 2; i < r.size(); ++i) {
    const double g0 = std::abs(r[i - 1].norm - r[i - 2].norm);
    const double g1 = std::abs(r[i].norm - r[i - 1].norm);
    if (g1 > g0 && g1 > 1e-12 * sup) return false;
  }
  return std::abs(r.back().norm - sup) <= band * sup;
}

double symbol_sup(const Symbol& f, const PhaseGrid& g) {
  if (f.sup_hint() > 0.0) return f.sup_hint();
  return f.sample(g, g.centers()).cwiseAbs().maxCoeff();
}

namespace {

using PointFn = std::function<SweepRecord(double, const PhaseGrid&)>;

SweepReport run_sweep(const SweepContext& ctx, const std::string& axiom, const std::vector<double>& hbar_list,
                      const GridPolicy& grids, const PointFn& point) {
  require(!hbar_list.empty(), "sweep: empty hbar list");
  for (std::size_t i = 0; i < hbar_list.size(); ++i) {
    require(hbar_list[i] > 0.0 && hbar_list[i] <= 1.0, "sweep: hbar must lie in (0,1]");
    require(i == 0 || hbar_list[i] < hbar_list[i - 1], "sweep: hbar list must be strictly decreasing");
  }
  SweepReport rep;
  rep.axiom = axiom;
  rep.field_preset = ctx.field_preset;
  rep.gauge = ctx.gauge;
  rep.fiducial = ctx.v.name;
  rep.records.resize(hbar_list.size());
  auto work = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const PhaseGrid g = grids(hbar_list[i]);
    SweepRecord rec = point(hbar_list[i], g);
    rec.hbar = hbar_list[i];
    rec.grid = grid_summary(g);
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.records[i] = std::move(rec);
  };
  const int threads = std::max(1, std::min<int>(ctx.threads, static_cast<int>(hbar_list.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < hbar_list.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < hbar_list.size(); i = next++) {
          try {
            work(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  return rep;
}

}  // namespace

SweepReport rieffel_sweep(const SweepContext& ctx, const Symbol& f, const std::vector<double>& hbar_list,
                          const GridPolicy& grids) {
  SweepReport rep = run_sweep(ctx, "rieffel", hbar_list, grids, [&](double h, const PhaseGrid& g) {
    SweepRecord r;
    BerezinDiagnostics diag;
    r.norm = operator_norm(berezin_op(ctx.A, ctx.v, h, f, g, &diag));
    if (diag.leakage_warning) r.warnings.push_back("symbol leakage " + std::to_string(diag.leakage));
    return r;
  });
  rep.reference = symbol_sup(f, grids(hbar_list.back()));
  for (auto& r : rep.records) r.defect = std::abs(r.norm - rep.reference);
  rep.verdict = verdict_rieffel(rep.records, rep.reference);
  rep.rule = "successive norm gaps shrink and final norm within 5% of sup|f|";
  return rep;
}

SweepReport vonneumann_sweep(const SweepContext& ctx, const Symbol& f, const Symbol& g,
                             const std::vector<double>& hbar_list, const GridPolicy& grids) {
  const Symbol fg = product(f, g);
  SweepReport rep = run_sweep(ctx, "vonneumann", hbar_list, grids, [&](double h, const PhaseGrid& grid) {
    SweepRecord r;
    const OperatorMatrix Bf = berezin_op(ctx.A, ctx.v, h, f, grid);
    const OperatorMatrix Bg = berezin_op(ctx.A, ctx.v, h, g, grid);
    const OperatorMatrix Bfg = berezin_op(ctx.A, ctx.v, h, fg, grid);
    const OperatorMatrix D = (Bf * Bg + Bg * Bf).scaled(0.5) - Bfg;
    r.norm = operator_norm(Bfg);
    r.defect = operator_norm(D);
    return r;
  });
  rep.verdict = verdict_strictly_decreasing(rep.records, 0.1);
  rep.rule = "defect strictly decreasing and final < 0.1 * initial";
  return rep;
}

SweepReport dirac_sweep(const SweepContext& ctx, const Symbol& f, const Symbol& g,
                        const std::vector<double>& hbar_list, const GridPolicy& grids) {
  SweepReport rep = run_sweep(ctx, "dirac", hbar_list, grids, [&](double h, const PhaseGrid& grid) {
    SweepRecord r;
    const Symbol pb = poisson_bracket(ctx.B, f, g, grid, &r.warnings);
    const OperatorMatrix Bf = berezin_op(ctx.A, ctx.v, h, f, grid);
    const OperatorMatrix Bg = berezin_op(ctx.A, ctx.v, h, g, grid);
    const OperatorMatrix Bpb = berezin_op(ctx.A, ctx.v, h, pb, grid);
    const OperatorMatrix D = (Bf * Bg - Bg * Bf).scaled(1.0 / (kI * h)) - Bpb;
    r.norm = operator_norm(Bpb);
    r.defect = operator_norm(D);
    return r;
  });
  rep.verdict = verdict_strictly_decreasing(rep.records, 0.2);
  rep.rule = "defect strictly decreasing and final < 0.2 * initial";
  return rep;
}

SweepReport semiclassical_sweep(const SweepContext& ctx, const Symbol& f, const std::vector<double>& hbar_list,
                                const GridPolicy& grids) {
  SweepReport rep = run_sweep(ctx, "semiclassical", hbar_list, grids, [&](double h, const PhaseGrid& grid) {
    SweepRecord r;
    const OperatorMatrix Bf = berezin_op(ctx.A, ctx.v, h, f, grid);
    const OperatorMatrix Of = weyl_op(ctx.A, h, f, grid);
    r.norm = operator_norm(Of);
    r.defect = operator_norm(Bf - Of);
    return r;
  });
  rep.verdict = verdict_strictly_decreasing(rep.records, 1.0 / 3.0);
  rep.rule = "defect strictly decreasing and final <= initial / 3";
  return rep;
}

SweepReport sigma_sweep(const SweepContext& ctx, const KernelFunction& F, const std::vector<double>& hbar_list,
                        const GridPolicy& grids, double tol) {
  SweepReport rep = run_sweep(ctx, "sigma", hbar_list, grids, [&](double h, const PhaseGrid& grid) {
    SweepRecord r;
    const Symbol f = partial_fourier(F, grid);
    const OperatorMatrix Bf = berezin_op(ctx.A, ctx.v, h, f, grid);
    const OperatorMatrix R = rep_operator(ctx.A, h, sigma_map(ctx.B, ctx.v, h, F, grid), grid.position());
    r.norm = operator_norm(Bf);
    r.defect = operator_norm(Bf - R) / std::max(r.norm, 1e-300);
    return r;
  });
  rep.verdict = true;
  for (const auto& r : rep.records) rep.verdict = rep.verdict && r.defect <= tol;
  rep.rule = "relative route defect below " + std::to_string(tol) + " at every hbar";
  return rep;
}

}  // namespace magq
