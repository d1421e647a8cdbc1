#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "magq/io.hpp"
#include "magq/presets.hpp"
#include "magq/weyl.hpp"

using namespace magq;

namespace {

CMat random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(d(rng), d(rng));
  return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("Op(1) is the identity") {
  for (const char* field : {"zero", "constant:1", "sinusoidal:1,0.5"}) {
    CAPTURE(field);
    const int dim = std::string(field) == "zero" ? 1 : 2;
    const FieldSetup fs = field_preset(field, "symmetric", dim);
    const PhaseGrid g(BoxGrid(dim, 2.5, 8), 0.25);
    const OperatorMatrix op = weyl_op(fs.A, 0.25, symbol_preset("constant:1", dim), g);
    CHECK((op.weighted() - CMat::Identity(op.size(), op.size())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Op of a position coordinate is multiplication") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const PhaseGrid g(BoxGrid(2, 2.5, 8), 0.25);
  const OperatorMatrix op = weyl_op(fs.A, 0.25, symbol_preset("coordinate:q_2", 2), g);
  const OperatorMatrix q = position_operator(0.25, 1, g.position());
  CHECK((op.kernel() - q.kernel()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("FFT path equals the kernel representation") {
  for (const char* field : {"constant:1", "sinusoidal:1,0.5"}) {
    CAPTURE(field);
    const FieldSetup fs = field_preset(field, "symmetric", 2);
    const PhaseGrid g(BoxGrid(2, 2.5, 8), 0.25);
    const Symbol f = symbol_preset("random_bandlimited:3", 2);
    const OperatorMatrix fast = weyl_op(fs.A, 0.25, f, g);
    const OperatorMatrix rep = rep_operator(fs.A, 0.25, inverse_partial_fourier(f, g), g.position());
    CHECK((fast.kernel() - rep.kernel()).cwiseAbs().maxCoeff() < 1e-10 * fast.kernel().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("real symbols give self-adjoint operators") {
  const FieldSetup fs = field_preset("sinusoidal:1,0.5", "landau", 2);
  const PhaseGrid g(BoxGrid(2, 2.5, 8), 0.25);
  const OperatorMatrix op = weyl_op(fs.A, 0.25, symbol_preset("random_bandlimited:9", 2), g);
  const CMat w = op.weighted();
  CHECK((w - w.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("harmonic oscillator spectrum") {
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(1, 8.0, 64), hbar);
  const OperatorMatrix op = weyl_op(VectorPotential::zero(1), hbar, symbol_preset("harmonic", 1), g);
  Eigen::SelfAdjointEigenSolver<CMat> es(op.weighted(), Eigen::EigenvaluesOnly);
  for (int n = 0; n <= 5; ++n) CHECK(es.eigenvalues()(n) == doctest::Approx(hbar * (2 * n + 1)).epsilon(1e-3));
}

TEST_CASE("Gaussian symbol spectrum matches the metaplectic oracle") {
  // Op(exp(-(x^2+xi^2)/(2 s2))) has eigenvalues q^n / (1 + tau), tau = hbar/(2 s2), q = (1-tau)/(1+tau).
  const double hbar = 0.25, s2 = 0.6;
  const PhaseGrid g(BoxGrid(1, 6.0, 64), hbar);
  const OperatorMatrix op =
      weyl_op(VectorPotential::zero(1), hbar, symbol_preset("gaussian:" + std::to_string(std::sqrt(s2)), 1), g);
  Eigen::SelfAdjointEigenSolver<CMat> es(op.weighted(), Eigen::EigenvaluesOnly);
  const double tau = hbar / (2 * s2), q = (1 - tau) / (1 + tau);
  const auto& ev = es.eigenvalues();
  for (int n = 0; n < 4; ++n) CHECK(ev(ev.size() - 1 - n) == doctest::Approx(std::pow(q, n) / (1 + tau)).epsilon(1e-6));
  CHECK(operator_norm(op) == doctest::Approx(1 / (1 + tau)).epsilon(1e-6));
}

TEST_CASE("Lanczos norm agrees with a dense SVD") {
  const CMat h = random_hermitian(300, 5);
  Eigen::JacobiSVD<CMat> svd(h);
  const NormResult lz = matrix_norm(h, 100);
  CHECK(lz.method != "dense");
  CHECK(lz.value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  CMat nh = h;
  nh(0, 5) += cplx(3.0, 1.0);
  Eigen::JacobiSVD<CMat> svd2(nh);
  CHECK(matrix_norm(nh, 100).value == doctest::Approx(svd2.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("weighted inner product") {
  const BoxGrid g(1, 1.0, 4);
  CVec u = CVec::Ones(4), v = CVec::Constant(4, cplx(0, 2));
  CHECK(std::abs(inner(g, u, v) - cplx(0, 4)) < 1e-14);
  CHECK(norm(g, u) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("canonical commutation relations on interior packets") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const BoxGrid g(2, 4.0, 48);
  const auto batch = interior_gaussian_batch(g, 0.5, 0.2, 3, 2);
  const CcrReport r = ccr_defect(fs.A, fs.B, 0.25, g, batch);
  CHECK(r.batch_size == 3);
  CHECK(r.position_defect < 1e-6);
  CHECK(r.momentum_defect < 1e-6);
}

TEST_CASE("twisted convolution is the kernel-side homomorphism") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const double hbar = 0.25;
  const BoxGrid g(2, 2.5, 8);
  const KernelFunction F = gaussian_kernel(2, make_pt({0.2, -0.1}), 0.8, make_pt({0.5, 0}), 0.9, make_pt({0.1, 0.3}));
  const KernelFunction G = gaussian_kernel(2, make_pt({-0.3, 0.2}), 0.9, make_pt({0, -0.4}), 1.1, make_pt({0, 0}));
  const OperatorMatrix lhs = rep_operator(fs.A, hbar, twisted_conv(fs.B, hbar, F, G, g), g);
  const OperatorMatrix rhs = rep_operator(fs.A, hbar, F, g) * rep_operator(fs.A, hbar, G, g);
  CHECK((lhs - rhs).weighted().norm() / rhs.weighted().norm() < 1e-7);
}

TEST_CASE("Moyal product realizes operator composition") {
  // Op(f) Op(g) = Rep(F^{-1} f <> F^{-1} g), and moyal_product is the partial Fourier image of that kernel.
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(1, 3.0, 16), hbar);
  const MagneticField B = MagneticField::zero(1);
  const VectorPotential A = VectorPotential::zero(1);
  const Symbol f = symbol_preset("gaussian:0.3,0.2,1", 1), h = symbol_preset("gaussian:-0.2,0,0.9", 1);
  const KernelFunction FG = twisted_conv(B, hbar, inverse_partial_fourier(f, g), inverse_partial_fourier(h, g), g.position());
  const OperatorMatrix lhs = rep_operator(A, hbar, FG, g.position());
  const OperatorMatrix rhs = weyl_op(A, hbar, f, g) * weyl_op(A, hbar, h, g);
  CHECK((lhs - rhs).weighted().norm() < 1e-10 * rhs.weighted().norm());
  const Symbol fh = moyal_product(B, hbar, f, h, g);
  const Pt x = make_pt({0.25}), xi = make_pt({-0.4});
  CHECK(std::abs(fh(x, xi) - partial_fourier(FG, g)(x, xi)) < 1e-14);
}

TEST_CASE("MAGW dump round trip") {
  const CMat m = random_hermitian(5, 1);
  const std::string path = (std::filesystem::temp_directory_path() / "magq_roundtrip.magw").string();
  write_magw(path, m, 0.125);
  MagwHeader h;
  const CMat r = read_magw(path, &h);
  CHECK(h.rows == 5);
  CHECK(h.hbar == 0.125);
  CHECK(r == m);
  CHECK(std::filesystem::file_size(path) == 32 + 16 * 25);
  std::filesystem::remove(path);
}
