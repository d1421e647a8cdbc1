#include <doctest.h>

#include <cmath>

#include "magq/fields.hpp"
#include "magq/presets.hpp"

using namespace magq;

TEST_CASE("segment rule integrates monomials exactly") {
  const SegmentRule r = SegmentRule::gauss_legendre(12);
  for (int k = 0; k <= 23; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("simplex rule has total weight one half") {
  const SimplexRule& r = default_simplex_rule();
  double s = 0.0;
  for (double w : r.weights) s += w;
  CHECK(s == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("constant field flux is field times signed area") {
  BMat b = BMat::Zero(2, 2);
  b(0, 1) = 2.0;
  b(1, 0) = -2.0;
  const MagneticField B = MagneticField::constant(b);
  const Pt a = make_pt({0, 0}), p = make_pt({1, 0}), q = make_pt({0, 1});
  CHECK(flux(B, a, p, q) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(flux(B, a, q, p) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(flux_triangle(B, a, p, q, default_simplex_rule()) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("antisymmetry is enforced") {
  CHECK_THROWS_AS(MagneticField(2, [](const Pt&) { return BMat::Identity(2, 2); }), ContractViolation);
}

TEST_CASE("sinusoidal flux matches the closed form over a rectangle split into triangles") {
  // B_12 = sin x_1 over [0,pi] x [0,1] has flux 2.
  const FieldSetup fs = field_preset("sinusoidal:0,1", "symmetric", 2);
  const Pt a = make_pt({0, 0}), b = make_pt({kPi, 0}), c = make_pt({kPi, 1}), d = make_pt({0, 1});
  const double phi = flux_triangle_adaptive(fs.B, a, b, c, 1e-13) + flux_triangle_adaptive(fs.B, a, c, d, 1e-13);
  CHECK(phi == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("Stokes identity for every preset potential") {
  for (const char* field : {"constant:1.3", "sinusoidal:1,0.5"})
    for (const char* gauge : {"symmetric", "landau", "poincare"}) {
      CAPTURE(field);
      CAPTURE(gauge);
      const FieldSetup fs = field_preset(field, gauge, 2);
      const auto pts = default_probes(2, 2.0, 12, 7);
      for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
        const Pt &x = pts[i], &y = pts[i + 1], &z = pts[i + 2];
        const double circ = fs.A.line_integral(x, y) + fs.A.line_integral(y, z) + fs.A.line_integral(z, x);
        CHECK(std::abs(circ - flux_triangle_adaptive(fs.B, x, y, z, 1e-13)) < 1e-10);
      }
      CHECK(verify_potential(fs.A, fs.B, default_probes(2, 2.0, 16, 3), 1e-9).pass);
    }
}

TEST_CASE("a zero potential does not generate a nonzero field") {
  const FieldSetup fs = field_preset("constant:1", "none", 2);
  const PotentialReport r = verify_potential(fs.A, fs.B, default_probes(2, 2.0, 16, 3), 1e-9);
  CHECK_FALSE(r.pass);
  CHECK(r.defect == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("three dimensional constant field through the radial gauge") {
  BMat b = BMat::Zero(3, 3);
  b(0, 1) = 0.7;
  b(1, 0) = -0.7;
  b(1, 2) = -0.4;
  b(2, 1) = 0.4;
  const MagneticField B = MagneticField::constant(b);
  const VectorPotential A = poincare_potential(B);
  CHECK(verify_potential(A, B, default_probes(3, 1.5, 10, 11), 1e-9).pass);
}

TEST_CASE("gauge transform shifts circulation by the endpoint difference") {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const GaugeFunction rho = gauge_preset("sin_x1", 2);
  const VectorPotential A2 = gauge_transform(fs.A, rho);
  const Pt x = make_pt({-0.3, 1.1}), y = make_pt({1.4, -0.2});
  CHECK(A2.line_integral(x, y) - fs.A.line_integral(x, y) ==
        doctest::Approx(std::sin(1.4) - std::sin(-0.3)).epsilon(1e-12));
  CHECK(gauge_gradient_defect(rho, default_probes(2, 2.0, 8, 1)) < 1e-7);
  CHECK(gauge_gradient_defect(gauge_preset("x1x2:1", 2), default_probes(2, 2.0, 8, 1)) < 1e-7);
}

TEST_CASE("symmetric and Landau gauges differ by the x1x2 gauge function") {
  const FieldSetup sym = field_preset("constant:1", "symmetric", 2);
  const FieldSetup lan = field_preset("constant:1", "landau", 2);
  const VectorPotential moved = gauge_transform(sym.A, gauge_preset("x1x2:1", 2));
  for (const Pt& p : default_probes(2, 2.0, 6, 5)) CHECK((moved(p) - lan.A(p)).norm() < 1e-12);
}

TEST_CASE("pentagon flux of a constant field is field times polygon area") {
  BMat b = BMat::Zero(2, 2);
  b(0, 1) = 1.0;
  b(1, 0) = -1.0;
  const MagneticField B = MagneticField::constant(b);
  // unit square with an apex at (0.5, 1.5): area 1.25
  const double phi = pentagon_flux(B, make_pt({0, 0}), make_pt({1, 0}), make_pt({1, 1}), make_pt({0.5, 1.5}),
                                   make_pt({0, 1}));
  CHECK(phi == doctest::Approx(1.25).epsilon(1e-13));
}
