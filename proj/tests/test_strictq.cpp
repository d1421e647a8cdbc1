#include <doctest.h>

#include <cmath>

#include "magq/presets.hpp"
#include "magq/strictq.hpp"

using namespace magq;

namespace {

SweepContext context(const char* field, int dim) {
  const FieldSetup fs = field_preset(field, "symmetric", dim);
  return SweepContext{fs.A, fs.B, FiducialVector::gaussian(dim), field, "symmetric", 1};
}

}  // namespace

TEST_CASE("classical product of Gaussians in the dual slot") {
  // int dz exp(-z^2/2) exp(-(y-z)^2/2) = sqrt(pi) exp(-y^2/4)
  const PhaseGrid g(BoxGrid(1, 4.0, 64), 0.25);
  const KernelFunction F(1, [](const Pt&, const Pt& w) { return cplx(std::exp(-0.5 * w.squaredNorm())); });
  const KernelFunction P = classical_product(F, F, g);
  for (double y : {0.0, 1.0, -2.5}) {
    const cplx v = P(make_pt({0.3}), make_pt({y}));
    CHECK(std::abs(v - std::sqrt(kPi) * std::exp(-0.25 * y * y)) < 1e-7);
  }
}

TEST_CASE("pentagon phases are trivial without a field") {
  const MagneticField B = MagneticField::zero(2);
  const Pt x = make_pt({0.1, 0.2}), y = make_pt({1, 0}), z = make_pt({0, 1}), a = make_pt({0.3, 0.3}),
           b = make_pt({-0.2, 0.5});
  for (int w : {1, 2}) CHECK(std::abs(phase_w(B, w, x, y, z, a, b, 0.1) - 1.0) < 1e-15);
}

TEST_CASE("Richardson extrapolation removes sqrt(hbar) and hbar terms") {
  std::vector<cplx> vals;
  for (int i = 0; i < 4; ++i) {
    const double h = 0.25 / std::pow(2.0, i);
    vals.push_back(cplx(1.5, -0.5) + 0.7 * std::sqrt(h) - 0.3 * h + 0.2 * std::pow(h, 1.5));
  }
  CHECK(std::abs(richardson_sqrt(vals) - cplx(1.5, -0.5)) < 1e-10);
}

TEST_CASE("pentagon phase lemma") {
  const std::vector<double> hl{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
  for (const char* field : {"constant:1", "sinusoidal:1,0.5"}) {
    CAPTURE(field);
    const FieldSetup fs = field_preset(field, "symmetric", 2);
    const PhaseLemmaReport r = phase_lemma_check(fs.B, make_pt({0.3, -0.4}), make_pt({0.5, 0.2}),
                                                 make_pt({-0.1, 0.6}), make_pt({0.2, 0.1}),
                                                 make_pt({-0.4, 0.3}), hl);
    // -sum z_j (y_k - z_k) B_jk(x) for planar B
    const double b = fs.B(make_pt({0.3, -0.4}))(0, 1);
    const double target = -b * (-0.1 * (0.2 - 0.6) - 0.6 * (0.5 + 0.1));
    CHECK(r.target == doctest::Approx(target).epsilon(1e-12));
    CHECK(r.error < 1e-3);
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(phase_lemma_check(MagneticField::zero(2), make_pt({0, 0}), make_pt({0, 0}), make_pt({0, 0}),
                                    make_pt({0, 0}), make_pt({0, 0}), {0.25, 0.2, 0.1}),
                  ContractViolation);
}

TEST_CASE("grid policies") {
  const GridPolicy s = scaled_grid_policy(1, 2.0, 2.0, 8);
  CHECK(s(0.25).M() == 8);
  CHECK(s(1.0 / 32).M() == 64);
  CHECK(s(0.3).M() % 2 == 0);
  const GridPolicy b = sqrt_box_policy(2, 5.0, 12);
  CHECK(b(0.25).position().half_width() == doctest::Approx(2.5));
  CHECK(b(0.0625).M() == 12);
}

TEST_CASE("verdict rules") {
  auto recs = [](std::initializer_list<double> d) {
    std::vector<SweepRecord> r;
    for (double x : d) r.push_back(SweepRecord{0, x, x, 0, "", {}});
    return r;
  };
  CHECK(verdict_strictly_decreasing(recs({1.0, 0.5, 0.2, 0.05}), 0.1));
  CHECK_FALSE(verdict_strictly_decreasing(recs({1.0, 0.5, 0.2, 0.15}), 0.1));
  CHECK_FALSE(verdict_strictly_decreasing(recs({1.0, 0.5, 0.5, 0.01}), 0.1));
  std::vector<SweepRecord> rf = recs({0.7, 0.85, 0.92, 0.97});
  CHECK(verdict_rieffel(rf, 1.0));
  rf.back().norm = 0.9;
  CHECK_FALSE(verdict_rieffel(rf, 1.0));
}

TEST_CASE("Rieffel sweep of the constant symbol") {
  const std::vector<double> hl{0.25, 0.125};
  const SweepReport r = rieffel_sweep(context("zero", 1), symbol_preset("constant:1", 1), hl,
                                      scaled_grid_policy(1, 4.0, 8.0, 32));
  for (const auto& rec : r.records) CHECK(rec.norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.verdict);
}

TEST_CASE("sign flip leaves Rieffel norms unchanged") {
  const std::vector<double> hl{0.25, 0.125};
  const GridPolicy gp = scaled_grid_policy(1, 4.0, 8.0, 32);
  const Symbol f = symbol_preset("gaussian:1", 1);
  const SweepReport a = rieffel_sweep(context("zero", 1), f, hl, gp);
  const SweepReport b = rieffel_sweep(context("zero", 1), scaled(f, -1.0), hl, gp);
  for (std::size_t i = 0; i < hl.size(); ++i) CHECK(a.records[i].norm == doctest::Approx(b.records[i].norm));
}

TEST_CASE("von Neumann with the unit symbol") {
  const std::vector<double> hl{0.25, 0.125};
  const SweepReport r = vonneumann_sweep(context("constant:1", 2), symbol_preset("gaussian:1", 2),
                                         symbol_preset("constant:1", 2), hl, sqrt_box_policy(2, 5.0, 16));
  for (const auto& rec : r.records) CHECK(rec.defect <= 1e-6);
}

TEST_CASE("von Neumann for translates with disjoint supports") {
  const std::vector<double> hl{0.25};
  const SweepReport r =
      vonneumann_sweep(context("zero", 1), symbol_preset("gaussian:-2.5,0,0.3", 1),
                       symbol_preset("gaussian:2.5,0,0.3", 1), hl, scaled_grid_policy(1, 5.0, 8.0, 32));
  CHECK(r.records[0].defect < 1e-4);
}

TEST_CASE("Dirac for a pair of position symbols") {
  const std::vector<double> hl{0.25, 0.125};
  // Smearing an x-only symbol keeps it x-only, and Op of such a symbol is multiplication.
  Symbol f(2, [](const Pt& x, const Pt&) { return cplx(std::exp(-0.5 * x.squaredNorm())); }, "fx");
  Symbol g(
      2, [](const Pt& x, const Pt&) { return cplx(std::exp(-0.5 * (x - make_pt({0.3, 0})).squaredNorm())); }, "gx");
  const SweepReport d = dirac_sweep(context("constant:1", 2), f.with_real(true), g.with_real(true), hl,
                                    sqrt_box_policy(2, 5.0, 8));
  for (const auto& rec : d.records) CHECK(rec.defect < 1e-5);
}

TEST_CASE("sweeps validate the hbar list") {
  const GridPolicy gp = scaled_grid_policy(1, 4.0, 8.0, 32);
  CHECK_THROWS_AS(rieffel_sweep(context("zero", 1), symbol_preset("constant:1", 1), {0.125, 0.25}, gp),
                  ContractViolation);
  CHECK_THROWS_AS(rieffel_sweep(context("zero", 1), symbol_preset("constant:1", 1), {2.0, 0.5}, gp),
                  ContractViolation);
}

TEST_CASE("threaded sweeps assemble records in hbar order") {
  const std::vector<double> hl{0.25, 0.125, 0.0625};
  const GridPolicy gp = scaled_grid_policy(1, 4.0, 8.0, 32);
  SweepContext c1 = context("zero", 1), c2 = context("zero", 1);
  c2.threads = 3;
  const Symbol f = symbol_preset("gaussian:1", 1);
  const SweepReport a = rieffel_sweep(c1, f, hl, gp), b = rieffel_sweep(c2, f, hl, gp);
  for (std::size_t i = 0; i < hl.size(); ++i) {
    CHECK(b.records[i].hbar == hl[i]);
    CHECK(a.records[i].norm == b.records[i].norm);
  }
}

TEST_CASE("defects scale quadratically under symbol rescaling") {
  const std::vector<double> hl{0.25, 0.125};
  const GridPolicy gp = scaled_grid_policy(1, 4.0, 8.0, 32);
  const Symbol f = symbol_preset("gaussian:0.3,0,1", 1), g = symbol_preset("gaussian:0,0.3,1", 1);
  const SweepReport a = dirac_sweep(context("zero", 1), f, g, hl, gp);
  const SweepReport b = dirac_sweep(context("zero", 1), scaled(f, 2.0), scaled(g, 2.0), hl, gp);
  for (std::size_t i = 0; i < hl.size(); ++i) CHECK(b.records[i].defect == doctest::Approx(4 * a.records[i].defect));
  CHECK(a.verdict == b.verdict);
}

TEST_CASE("kernel bracket transports to the Poisson bracket") {
  // F(kernel_bracket(F, G)) = {F F, F G}^B for B = 0 and resolved Gaussians.
  const PhaseGrid g(BoxGrid(1, 5.0, 40), 0.25);
  const MagneticField B = MagneticField::zero(1);
  const KernelFunction F = gaussian_kernel(1, make_pt({0.2}), 1.0, make_pt({0.0}), 0.8, make_pt({0.3}));
  const KernelFunction G = gaussian_kernel(1, make_pt({-0.1}), 0.9, make_pt({0.2}), 1.0, make_pt({-0.2}));
  const Symbol lhs = partial_fourier(kernel_bracket(B, F, G, g), g);
  const Symbol rhs = poisson_bracket(B, partial_fourier(F, g), partial_fourier(G, g), g);
  const CMat a = lhs.sample(g), b = rhs.sample(g);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-5 * b.cwiseAbs().maxCoeff());
}

TEST_CASE("sigma sweep passes the route identity") {
  const SweepReport r =
      sigma_sweep(context("constant:1", 2),
                  gaussian_kernel(2, make_pt({0, 0.1}), 0.9, make_pt({0.1, 0}), 1.0, make_pt({0, 0})),
                  {0.25, 0.125}, sqrt_box_policy(2, 5.0, 8));
  CHECK(r.verdict);
}
