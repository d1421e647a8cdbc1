#include <doctest.h>

#include <cmath>

#include "magq/fft.hpp"
#include "magq/phasespace.hpp"
#include "magq/presets.hpp"

using namespace magq;

TEST_CASE("box grid geometry") {
  const BoxGrid g(2, 3.0, 12);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.size() == 144);
  CHECK(g.weight() == doctest::Approx(0.25));
  CHECK(g.axis_node(0) == doctest::Approx(-3.0));
  const Pt last = g.node(143);
  CHECK(last(0) == doctest::Approx(2.5));
  CHECK(last(1) == doctest::Approx(2.5));
}

TEST_CASE("phase cell carries one state per M^N cells") {
  const PhaseGrid g(BoxGrid(2, 2.0, 8), 0.25);
  CHECK(g.cell_weight() == doctest::Approx(1.0 / 64));
  CHECK(g.momentum_spacing() == doctest::Approx(kPi * 0.25 / 2.0));
  CHECK(g.dual_spacing() == doctest::Approx(0.5 / 0.25));
  CHECK(g.cell_volume() / std::pow(2 * kPi * 0.25, 2) == doctest::Approx(g.cell_weight()));
}

TEST_CASE("dft matches the direct sum") {
  const int M = 6;
  CVec a(M * M);
  for (int i = 0; i < M * M; ++i) a(i) = cplx(std::cos(0.3 * i), std::sin(1.1 * i));
  CVec b = a;
  dft_vector(b, 2, M, -1);
  for (int k = 0; k < M * M; ++k) {
    int kk[2];
    unflatten(k, 2, M, kk);
    cplx s = 0.0;
    for (int m = 0; m < M * M; ++m) {
      int mm[2];
      unflatten(m, 2, M, mm);
      s += std::exp(cplx(0, -2 * kPi * (mm[0] * kk[0] + mm[1] * kk[1]) / M)) * a(m);
    }
    CHECK(std::abs(s - b(k)) < 1e-12);
  }
}

TEST_CASE("partial Fourier transform of a Gaussian kernel") {
  // int dw exp(i w eta) exp(-w^2/2) = sqrt(2 pi) exp(-eta^2/2)
  // momentum window |eta| < 2 pi, dual spacing 1/2
  const PhaseGrid g(BoxGrid(1, 4.0, 64), 0.25);
  const KernelFunction F(1, [](const Pt&, const Pt& w) { return cplx(std::exp(-0.5 * w.squaredNorm())); });
  const Symbol f = partial_fourier(F, g);
  for (int k : {32, 36, 22}) {
    const double eta = g.momentum(k)(0);
    const cplx val = f(make_pt({0.5}), make_pt({eta}));
    CHECK(std::abs(val - std::sqrt(2 * kPi) * std::exp(-0.5 * eta * eta)) < 1e-7);
  }
}

TEST_CASE("partial Fourier sample transforms are mutually inverse") {
  const PhaseGrid g(BoxGrid(2, 2.5, 8), 0.25);
  const Symbol f = symbol_preset("random_bandlimited:4", 2);
  const CMat s = f.sample(g);
  const CMat back = partial_fourier_samples(inverse_partial_fourier_samples(s, g), g);
  CHECK((back - s).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sampled symbols reproduce their samples") {
  const PhaseGrid g(BoxGrid(1, 3.0, 16), 0.25);
  const Symbol f = symbol_preset("gaussian:1", 1);
  const CMat s = f.sample(g);
  const Symbol r = sampled_symbol(g, s, "resampled");
  CHECK((r.sample(g) - s).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symbol cache equals the evaluator") {
  const PhaseGrid g(BoxGrid(1, 3.0, 16), 0.25);
  Symbol f = symbol_preset("harmonic", 1);
  const CMat direct = f.sample(g);
  f.cache(g);
  REQUIRE(f.cached() != nullptr);
  CHECK((*f.cached() - direct).cwiseAbs().maxCoeff() == 0.0);
  // same M and hbar on a different box must not hit the cache
  const PhaseGrid other(BoxGrid(1, 5.0, 16), 0.25);
  const Symbol fresh = symbol_preset("harmonic", 1);
  CHECK((f.sample(other) - fresh.sample(other)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral gradient of a resolved Gaussian") {
  const PhaseGrid g(BoxGrid(1, 6.0, 96), 0.25);
  const Symbol f = symbol_preset("gaussian:1", 1);
  std::vector<CMat> dx, dxi;
  const double tail = spectral_gradient(f.sample(g), g, dx, dxi);
  CHECK(tail < 1e-8);
  double err = 0.0;
  for (int p = 0; p < g.position().size(); ++p)
    for (int k = 0; k < g.momentum_size(); ++k) {
      const double x = g.position().node(p)(0), xi = g.momentum(k)(0);
      const double v = std::exp(-0.5 * (x * x + xi * xi));
      err = std::max(err, std::abs(dx[0](p, k) + x * v));
    }
  CHECK(err < 1e-6);
}

TEST_CASE("canonical and magnetic Poisson brackets of coordinates") {
  const FieldSetup fs = field_preset("constant:1.5", "symmetric", 2);
  const PhaseGrid g(BoxGrid(2, 2.0, 8), 0.25);
  const Symbol q1 = symbol_preset("coordinate:q_1", 2), p1 = symbol_preset("coordinate:p_1", 2);
  const Symbol p2 = symbol_preset("coordinate:p_2", 2);
  const Pt x = make_pt({0.3, -0.2}), xi = make_pt({0.1, 0.4});
  CHECK(std::abs(poisson_bracket(fs.B, q1, p1, g)(x, xi) - 1.0) < 1e-14);
  CHECK(std::abs(poisson_bracket(fs.B, p1, p2, g)(x, xi) - 1.5) < 1e-14);
  CHECK(std::abs(poisson_bracket(fs.B, p2, p1, g)(x, xi) + 1.5) < 1e-14);
}

TEST_CASE("sampled bracket agrees with the analytic bracket") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const PhaseGrid g(BoxGrid(2, 4.5, 36), 0.5);
  const Symbol f = symbol_preset("gaussian:0.3,0,0,0.2,1", 2);
  const Symbol h = symbol_preset("gaussian:0,0.2,-0.3,0,1", 2);
  const CMat exact = poisson_bracket(fs.B, f, h, g).sample(g);
  const Symbol fs_ = sampled_symbol(g, f.sample(g), "f"), hs = sampled_symbol(g, h.sample(g), "h");
  const CMat spectral = poisson_bracket(fs.B, fs_, hs, g).sample(g);
  CHECK((exact - spectral).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("symplectic form is antisymmetric in the tangent slots") {
  const FieldSetup fs = field_preset("sinusoidal:1,0.5", "symmetric", 2);
  const PhasePoint X{make_pt({0.2, 0.1}), make_pt({0, 0})};
  const PhasePoint Y{make_pt({1, 2}), make_pt({-1, 0.5})};
  const PhasePoint Z{make_pt({0.3, -1}), make_pt({2, 1})};
  CHECK(symplectic_form(fs.B, X, Y, Z) == doctest::Approx(-symplectic_form(fs.B, X, Z, Y)));
  const double b = 1 + 0.5 * std::sin(0.2);
  CHECK(symplectic_form(fs.B, X, Y, Z) ==
        doctest::Approx(Z.x.dot(Y.xi) - Y.x.dot(Z.xi) + b * (Y.x(0) * Z.x(1) - Y.x(1) * Z.x(0))));
}

TEST_CASE("pointwise symbol algebra") {
  const Symbol f = symbol_preset("harmonic", 1), g = symbol_preset("constant:2", 1);
  const Pt x = make_pt({0.5}), xi = make_pt({-1.0});
  CHECK(std::abs(product(f, g)(x, xi) - 2.5) < 1e-14);
  CHECK(std::abs(linear_combination(2.0, f, -1.0, g)(x, xi) - 0.5) < 1e-14);
  CHECK(std::abs(scaled(f, cplx(0, 1))(x, xi) - cplx(0, 1.25)) < 1e-14);
}

TEST_CASE("mixed L1-Linf norm of a separable kernel") {
  // sup_x int |F| dw with F = exp(-x^2/2) exp(-w^2/2): sqrt(2 pi) at x = 0
  const PhaseGrid g(BoxGrid(1, 4.0, 32), 0.25);
  const KernelFunction F(1, [](const Pt& x, const Pt& w) {
    return cplx(std::exp(-0.5 * x.squaredNorm() - 0.5 * w.squaredNorm()));
  });
  CHECK(norm_1_inf(F, g) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-7));
}
