#include "magq/fields.hpp"

#include <cmath>
#include <random>

namespace magq {

namespace {

void check_dim(const Pt& p, int n, const char* what) {
  require(p.size() == n, std::string(what) + ": dimension mismatch");
}

double bilinear(const BMat& b, const Pt& u, const Pt& v) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index k = 0; k < b.cols(); ++k) s += b(j, k) * u(j) * v(k);
  return s;
}

}  // namespace

std::vector<Pt> default_probes(int dim, double radius, int count, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Pt> out;
  for (int i = 0; i < count; ++i) {
    Pt p(dim);
    for (int d = 0; d < dim; ++d) p(d) = u(gen);
    out.push_back(p);
  }
  return out;
}

MagneticField::MagneticField(int dim, Eval eval, std::string label,
                             std::optional<double> derivative_bound_hint)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)), hint_(derivative_bound_hint) {
  require(dim >= 1 && dim <= 3, "MagneticField: dimension must be 1..3");
  for (const Pt& p : default_probes(dim, 3.0, 16, 7u)) {
    const BMat b = eval_(p);
    require(b.rows() == dim && b.cols() == dim, "MagneticField: component shape mismatch");
    const double asym = (b + b.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-12 * (1.0 + b.cwiseAbs().maxCoeff()),
            "MagneticField: components are not antisymmetric");
  }
}

MagneticField MagneticField::zero(int dim) {
  MagneticField f(dim, [dim](const Pt&) { return BMat(BMat::Zero(dim, dim)); }, "zero");
  f.constant_ = BMat::Zero(dim, dim);
  f.zero_ = true;
  return f;
}

MagneticField MagneticField::constant(const BMat& b, std::string label) {
  const int n = static_cast<int>(b.rows());
  require(n != 1 || b(0, 0) == 0.0, "MagneticField: a 2-form on R^1 vanishes");
  MagneticField f(n, [b](const Pt&) { return b; }, std::move(label), 0.0);
  f.constant_ = b;
  f.zero_ = b.cwiseAbs().maxCoeff() == 0.0;
  return f;
}

MagneticField MagneticField::planar(std::function<double(const Pt&)> b12, std::string label) {
  return MagneticField(
      2,
      [b12 = std::move(b12)](const Pt& x) {
        BMat b(2, 2);
        const double v = b12(x);
        b << 0.0, v, -v, 0.0;
        return b;
      },
      std::move(label));
}

VectorPotential::VectorPotential(int dim, Eval eval, std::string label, Circ exact_circulation)
    : dim_(dim), eval_(std::move(eval)), label_(std::move(label)), exact_(std::move(exact_circulation)) {
  require(dim >= 1 && dim <= 3, "VectorPotential: dimension must be 1..3");
}

VectorPotential VectorPotential::zero(int dim) {
  return VectorPotential(
      dim, [dim](const Pt&) { return Pt(Pt::Zero(dim)); }, "zero",
      [](const Pt&, const Pt&) { return 0.0; });
}

double VectorPotential::line_integral(const Pt& x, const Pt& y) const {
  if (exact_) return exact_(x, y);
  return circulation(*this, x, y, default_segment_rule());
}

GaugeFunction GaugeFunction::zero(int dim) {
  return {[](const Pt&) { return 0.0; }, [dim](const Pt&) { return Pt(Pt::Zero(dim)); }, "zero"};
}

double flux_triangle(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c,
                     const SimplexRule& rule) {
  const int n = B.dim();
  check_dim(a, n, "flux_triangle");
  check_dim(b, n, "flux_triangle");
  check_dim(c, n, "flux_triangle");
  require(!rule.weights.empty(), "flux_triangle: empty rule");
  if (n == 1 || B.is_zero()) return 0.0;
  const Pt u = b - a;
  const Pt v = c - b;
  double s = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const double mu = rule.mu[q];
    const Pt x = a + mu * u + (mu * rule.nu[q]) * v;
    s += rule.weights[q] * bilinear(B(x), u, v);
  }
  return s;
}

double flux_triangle_adaptive(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c,
                              double tol) {
  int order = 16;
  double prev = flux_triangle(B, a, b, c, SimplexRule::gauss_legendre(order));
  while (order < 256) {
    order *= 2;
    const double next = flux_triangle(B, a, b, c, SimplexRule::gauss_legendre(order));
    if (std::abs(next - prev) <= tol) return next;
    prev = next;
  }
  return prev;
}

double flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c) {
  if (B.is_zero() || B.dim() == 1) return 0.0;
  if (const auto& k = B.constant_value()) return 0.5 * bilinear(*k, b - a, c - b);
  return flux_triangle(B, a, b, c, default_simplex_rule());
}

double circulation(const VectorPotential& A, const Pt& x, const Pt& y, const SegmentRule& rule) {
  const int n = A.dim();
  check_dim(x, n, "circulation");
  check_dim(y, n, "circulation");
  const Pt d = y - x;
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    s += rule.weights[q] * A(x + rule.nodes[q] * d).dot(d);
  return s;
}

double pentagon_flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c, const Pt& d,
                     const Pt& e, const SimplexRule& rule) {
  return flux_triangle(B, a, b, c, rule) + flux_triangle(B, a, c, d, rule) +
         flux_triangle(B, a, d, e, rule);
}

double pentagon_flux(const MagneticField& B, const Pt& a, const Pt& b, const Pt& c, const Pt& d,
                     const Pt& e) {
  return flux(B, a, b, c) + flux(B, a, c, d) + flux(B, a, d, e);
}

VectorPotential gauge_transform(const VectorPotential& A, const GaugeFunction& rho) {
  const int n = A.dim();
  const Pt probe = Pt::Zero(n);
  require(rho.grad(probe).size() == n, "gauge_transform: dimension mismatch");
  VectorPotential::Circ circ;
  if (A.has_exact_circulation())
    circ = [A, rho](const Pt& x, const Pt& y) { return A.line_integral(x, y) + rho.rho(y) - rho.rho(x); };
  return VectorPotential(
      n, [A, rho](const Pt& x) { return Pt(A(x) + rho.grad(x)); }, A.label() + "+d(" + rho.label + ")",
      circ);
}

VectorPotential poincare_potential(const MagneticField& B, const SegmentRule& rule) {
  const int n = B.dim();
  return VectorPotential(
      n,
      [B, rule, n](const Pt& x) {
        Pt a = Pt::Zero(n);
        if (B.is_zero() || n == 1) return a;
        BMat acc = BMat::Zero(n, n);
        if (const auto& k = B.constant_value()) {
          acc = 0.5 * *k;
        } else {
          for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = rule.nodes[q];
            acc += (rule.weights[q] * s) * B(Pt(s * x));
          }
        }
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) a(j) -= x(k) * acc(j, k);
        return a;
      },
      "poincare(" + B.label() + ")");
}

PotentialReport verify_potential(const VectorPotential& A, const MagneticField& B,
                                 const std::vector<Pt>& probes, double tol) {
  require(!probes.empty(), "verify_potential: empty probe set");
  require(A.dim() == B.dim(), "verify_potential: dimension mismatch");
  const int n = A.dim();
  const double h = 1e-5;
  PotentialReport rep;
  for (const Pt& x : probes) {
    check_dim(x, n, "verify_potential");
    // dA(j, k) = d_j A_k
    BMat dA(n, n);
    for (int j = 0; j < n; ++j) {
      Pt xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const Pt d = (A(xp) - A(xm)) / (2.0 * h);
      for (int k = 0; k < n; ++k) dA(j, k) = d(k);
    }
    const BMat b = B(x);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        rep.defect = std::max(rep.defect, std::abs(dA(j, k) - dA(k, j) - b(j, k)));
  }
  rep.pass = rep.defect <= tol;
  return rep;
}

double gauge_gradient_defect(const GaugeFunction& rho, const std::vector<Pt>& probes) {
  const double h = 1e-5;
  double worst = 0.0;
  for (const Pt& x : probes) {
    const Pt g = rho.grad(x);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      Pt xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      worst = std::max(worst, std::abs((rho.rho(xp) - rho.rho(xm)) / (2.0 * h) - g(j)));
    }
  }
  return worst;
}

}  // namespace magq
