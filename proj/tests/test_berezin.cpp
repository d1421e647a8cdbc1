#include <doctest.h>

#include <cmath>

#include "magq/berezin.hpp"
#include "magq/presets.hpp"

using namespace magq;

TEST_CASE("fiducial vectors are normalized") {
  const BoxGrid g(1, 8.0, 64);
  CHECK(FiducialVector::gaussian(1).grid_norm(g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(FiducialVector::gaussian(1, 1.4).grid_norm(g) == doctest::Approx(1.0).epsilon(1e-12));
  const FiducialVector odd = FiducialVector::odd_perturbed(1, 0.5);
  CHECK(odd.grid_norm(g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(odd.parity == Parity::None);
  const BoxGrid g2(2, 6.0, 32);
  CHECK(FiducialVector::gaussian(2).grid_norm(g2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fiducial gradient matches finite differences") {
  const FiducialVector v = FiducialVector::gaussian(2, 0.8);
  const Pt x = make_pt({0.3, -0.5});
  const CVec gr = v.gradient(x);
  const double e = 1e-6;
  for (int d = 0; d < 2; ++d) {
    Pt xp = x, xm = x;
    xp(d) += e;
    xm(d) -= e;
    CHECK(std::abs(gr(d) - (v(xp) - v(xm)) / (2 * e)) < 1e-8);
  }
}

TEST_CASE("coherent vectors are unit vectors with the right mean momentum") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const double hbar = 0.25;
  const BoxGrid g(2, 3.0, 24);
  const PhasePoint Z{make_pt({0.2, -0.1}), make_pt({0.5, 0.3})};
  const CoherentState s = coherent_vector(fs.A, FiducialVector::gaussian(2), hbar, Z, g);
  CHECK_FALSE(s.boundary_warning);
  CHECK(norm(g, s.samples) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(overlap_kernel(fs.A, FiducialVector::gaussian(2), hbar, Z, Z, g) - 1.0) < 1e-9);
}

TEST_CASE("resolution of identity") {
  const PhaseGrid g(BoxGrid(1, 8.0, 64), 0.25);
  const CoherentFrame frame(VectorPotential::zero(1), FiducialVector::gaussian(1), g);
  const CMat w = frame.gram().weighted();
  CHECK((w - CMat::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("structured assembly agrees with the frame sum") {
  const FieldSetup fs = field_preset("sinusoidal:1,0.5", "symmetric", 2);
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(2, 2.5, 8), hbar);
  const Symbol f = symbol_preset("random_bandlimited:2", 2);
  const CoherentFrame frame(fs.A, FiducialVector::gaussian(2), g);
  CVec vals(frame.cols());
  for (int c = 0; c < frame.cols(); ++c) {
    const PhasePoint X = frame.point(c);
    vals(c) = f(X.x, X.xi);
  }
  const CMat direct = frame.gram(vals).weighted();
  const CMat fast = berezin_op(fs.A, FiducialVector::gaussian(2), hbar, f, g).weighted();
  CHECK((direct - fast).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Berezin norm of a Gaussian symbol") {
  // B(f) = Op(f * gamma) for B = 0 with gamma of variance hbar/2; the top eigenvalue is s2/(s2+hbar).
  const double hbar = 0.25, s2 = 0.6;
  const PhaseGrid g(BoxGrid(1, 6.0, 64), hbar);
  const OperatorMatrix op = berezin_op(VectorPotential::zero(1), FiducialVector::gaussian(1), hbar,
                                       symbol_preset("gaussian:" + std::to_string(std::sqrt(s2)), 1), g);
  CHECK(operator_norm(op) == doctest::Approx(s2 / (s2 + hbar)).epsilon(1e-6));
}

TEST_CASE("Berezin harmonic oscillator is shifted by hbar") {
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(1, 8.0, 64), hbar);
  const OperatorMatrix op =
      berezin_op(VectorPotential::zero(1), FiducialVector::gaussian(1), hbar, symbol_preset("harmonic", 1), g);
  Eigen::SelfAdjointEigenSolver<CMat> es(op.weighted(), Eigen::EigenvaluesOnly);
  for (int n = 0; n <= 5; ++n) CHECK(es.eigenvalues()(n) == doctest::Approx(hbar * (2 * n + 2)).epsilon(1e-2));
}

TEST_CASE("nonnegative symbols give positive operators") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const PhaseGrid g(BoxGrid(2, 2.5, 8), 0.25);
  const Symbol r = symbol_preset("random_bandlimited:6", 2);
  const OperatorMatrix op = berezin_op(fs.A, FiducialVector::gaussian(2), 0.25, product(r, r), g);
  Eigen::SelfAdjointEigenSolver<CMat> es(op.weighted(), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
}

TEST_CASE("Husimi density of a coherent state") {
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(1, 6.0, 48), hbar);
  const PhasePoint Z{make_pt({0.5}), make_pt({-0.5})};
  const CoherentState s = coherent_vector(VectorPotential::zero(1), FiducialVector::gaussian(1), hbar, Z, g.position());
  const HusimiResult h = husimi(VectorPotential::zero(1), FiducialVector::gaussian(1), hbar, s.samples, g);
  CHECK(h.mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(h.values.minCoeff() >= 0.0);
  CHECK_FALSE(h.leakage_warning);
  // peak value |<v_Z, v_Z>|^2 / (2 pi hbar)
  CHECK(h.values.maxCoeff() <= 1.0 / (2 * kPi * hbar) * (1 + 1e-9));
}

TEST_CASE("rank-one Berezin delta has the normalized trace") {
  const double hbar = 0.25;
  const BoxGrid g(1, 6.0, 48);
  const PhasePoint Z{make_pt({0.0}), make_pt({0.3})};
  const OperatorMatrix d = berezin_delta(VectorPotential::zero(1), FiducialVector::gaussian(1), hbar, Z, g);
  CHECK(d.weighted().trace().real() == doctest::Approx(1.0 / (2 * kPi * hbar)).epsilon(1e-9));
}

TEST_CASE("momentum expectation of a coherent state") {
  // For an even fiducial the anti-Wick expectation of p_j in v_Z is zeta_j.
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const double hbar = 0.25;
  const BoxGrid g(2, 3.0, 24);
  const PhasePoint Z{make_pt({0.1, -0.2}), make_pt({0.4, -0.3})};
  const CoherentState s = coherent_vector(fs.A, FiducialVector::gaussian(2), hbar, Z, g);
  for (int j = 0; j < 2; ++j) {
    const PExpectation e = berezin_p_expectation(fs.A, FiducialVector::gaussian(2), hbar, s.samples, j, g);
    CHECK(std::abs(e.total() - Z.xi(j)) < 1e-4);
  }
}

TEST_CASE("gauge covariance") {
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(2, 2.5, 8), hbar);
  const FieldSetup fs = field_preset("sinusoidal:1,0.5", "symmetric", 2);
  const double d = gauge_covariance_check(fs.A, gauge_preset("sin_x1", 2), FiducialVector::gaussian(2), hbar,
                                          symbol_preset("random_bandlimited:1", 2), g);
  CHECK(d < 1e-10);
}

TEST_CASE("route identity through the Sigma map") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const double hbar = 0.25;
  const PhaseGrid g(BoxGrid(2, 2.5, 8), hbar);
  const KernelFunction F = gaussian_kernel(2, make_pt({0.1, 0}), 0.9, make_pt({0, 0.2}), 1.0, make_pt({0.2, -0.1}));
  const FiducialVector v = FiducialVector::gaussian(2);
  const OperatorMatrix lhs = berezin_op(fs.A, v, hbar, partial_fourier(F, g), g);
  const OperatorMatrix rhs = rep_operator(fs.A, hbar, sigma_map(fs.B, v, hbar, F, g), g.position());
  CHECK(operator_norm(lhs - rhs) <= 1e-8 * operator_norm(lhs));
}
