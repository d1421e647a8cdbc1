#include "magq/presets.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace magq {

namespace {

std::pair<std::string, std::string> split_head(const std::string& s) {
  const auto p = s.find(':');
  if (p == std::string::npos) return {s, ""};
  return {s.substr(0, p), s.substr(p + 1)};
}

std::vector<double> parse_list(const std::string& s, const std::string& ctx) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), ctx + ": trailing characters in '" + item + "'");
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ContractViolation*>(&e)) throw;
      throw ContractViolation(ctx + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

double parse_one(const std::string& s, const std::string& ctx) {
  const auto v = parse_list(s, ctx);
  require(v.size() == 1, ctx + ": expected one number");
  return v[0];
}

// Segment integral of -eps cos(x_1) dx_2 along [x, y].
double cos_circulation(double eps, const Pt& x, const Pt& y) {
  const double d1 = y(0) - x(0);
  const double d2 = y(1) - x(1);
  if (std::abs(d1) < 1e-8) return -eps * d2 * std::cos(0.5 * (x(0) + y(0)));
  return -eps * d2 * (std::sin(y(0)) - std::sin(x(0))) / d1;
}

}  // namespace

FieldSetup field_preset(const std::string& field, const std::string& gauge, int dim) {
  require(dim >= 1 && dim <= 3, "field preset: dimension must be 1..3");
  const auto [kind, args] = split_head(field);
  double b0 = 0.0, eps = 0.0;
  if (kind == "zero") {
    require(args.empty(), "field preset: 'zero' takes no arguments");
  } else if (kind == "constant") {
    b0 = parse_one(args, "field preset constant");
  } else if (kind == "sinusoidal") {
    const auto v = parse_list(args, "field preset sinusoidal");
    require(v.size() == 2, "field preset sinusoidal: expected b0,eps");
    b0 = v[0];
    eps = v[1];
  } else {
    throw ContractViolation("unknown field preset '" + field + "'");
  }
  require(gauge == "symmetric" || gauge == "landau" || gauge == "poincare" || gauge == "none",
          "unknown gauge '" + gauge + "'");
  if (b0 == 0.0 && eps == 0.0) {
    return {MagneticField::zero(dim), VectorPotential::zero(dim), field, gauge};
  }
  require(dim >= 2, "field preset: a nonzero field needs N >= 2");

  MagneticField B = MagneticField::zero(dim);
  if (eps == 0.0) {
    BMat b = BMat::Zero(dim, dim);
    b(0, 1) = b0;
    b(1, 0) = -b0;
    B = MagneticField::constant(b, field);
  } else {
    B = MagneticField(
        dim,
        [dim, b0, eps](const Pt& x) {
          BMat b = BMat::Zero(dim, dim);
          b(0, 1) = b0 + eps * std::sin(x(0));
          b(1, 0) = -b(0, 1);
          return b;
        },
        field, std::abs(eps));
  }

  if (gauge == "poincare") return {B, poincare_potential(B), field, gauge};
  // Deliberately inconsistent pairing (A = 0 for any B), used to exercise the potential check.
  if (gauge == "none") return {B, VectorPotential::zero(dim), field, gauge};

  if (gauge == "symmetric") {
    VectorPotential A(
        dim,
        [dim, b0, eps](const Pt& x) {
          Pt a = Pt::Zero(dim);
          a(0) = -0.5 * b0 * x(1);
          a(1) = 0.5 * b0 * x(0) - eps * std::cos(x(0));
          return a;
        },
        "symmetric",
        [b0, eps](const Pt& x, const Pt& y) {
          double c = 0.5 * b0 * (x(0) * y(1) - x(1) * y(0));
          if (eps != 0.0) c += cos_circulation(eps, x, y);
          return c;
        });
    return {B, A, field, gauge};
  }
  VectorPotential A(
      dim,
      [dim, b0, eps](const Pt& x) {
        Pt a = Pt::Zero(dim);
        a(1) = b0 * x(0) - eps * std::cos(x(0));
        return a;
      },
      "landau",
      [b0, eps](const Pt& x, const Pt& y) {
        double c = 0.5 * b0 * (x(0) + y(0)) * (y(1) - x(1));
        if (eps != 0.0) c += cos_circulation(eps, x, y);
        return c;
      });
  return {B, A, field, gauge};
}

GaugeFunction gauge_preset(const std::string& spec, int dim) {
  const auto [kind, args] = split_head(spec);
  if (kind == "zero") return GaugeFunction::zero(dim);
  if (kind == "sin_x1") {
    GaugeFunction g;
    g.label = spec;
    g.rho = [](const Pt& x) { return std::sin(x(0)); };
    g.grad = [dim](const Pt& x) {
      Pt d = Pt::Zero(dim);
      d(0) = std::cos(x(0));
      return d;
    };
    return g;
  }
  if (kind == "x1x2") {
    require(dim >= 2, "gauge preset x1x2 needs N >= 2");
    const double c = parse_one(args, "gauge preset x1x2");
    GaugeFunction g;
    g.label = spec;
    g.rho = [c](const Pt& x) { return 0.5 * c * x(0) * x(1); };
    g.grad = [c, dim](const Pt& x) {
      Pt d = Pt::Zero(dim);
      d(0) = 0.5 * c * x(1);
      d(1) = 0.5 * c * x(0);
      return d;
    };
    return g;
  }
  throw ContractViolation("unknown gauge function preset '" + spec + "'");
}

namespace {

Symbol gaussian_symbol(int dim, Pt x0, Pt xi0, double width, const std::string& label) {
  require(width > 0.0, "gaussian symbol: width must be positive");
  const double s2 = width * width;
  Symbol f(
      dim,
      [x0, xi0, s2](const Pt& x, const Pt& xi) {
        return cplx(std::exp(-((x - x0).squaredNorm() + (xi - xi0).squaredNorm()) / (2.0 * s2)));
      },
      label);
  f.with_gradient([x0, xi0, s2](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
    const double v = std::exp(-((x - x0).squaredNorm() + (xi - xi0).squaredNorm()) / (2.0 * s2));
    gx = ((-v / s2) * (x - x0)).cast<cplx>();
    gxi = ((-v / s2) * (xi - xi0)).cast<cplx>();
  });
  f.with_real(true).with_sup(1.0);
  return f;
}

Symbol random_bandlimited(int dim, unsigned seed, const std::string& label) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-0.5, 0.5), phase(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> freq(-1, 1);
  struct Term {
    double a, phi;
    Pt k, l;
  };
  std::vector<Term> terms;
  for (int t = 0; t < 3; ++t) {
    Term term{amp(rng), phase(rng), Pt(dim), Pt(dim)};
    for (int d = 0; d < dim; ++d) {
      term.k(d) = freq(rng);
      term.l(d) = freq(rng);
    }
    terms.push_back(term);
  }
  auto eval = [terms](const Pt& x, const Pt& xi, double& poly, Pt& px, Pt& pxi) {
    poly = 1.0;
    px.setZero(x.size());
    pxi.setZero(x.size());
    for (const Term& t : terms) {
      const double arg = t.k.dot(x) + t.l.dot(xi) + t.phi;
      poly += t.a * std::cos(arg);
      px -= t.a * std::sin(arg) * t.k;
      pxi -= t.a * std::sin(arg) * t.l;
    }
  };
  Symbol f(
      dim,
      [eval](const Pt& x, const Pt& xi) {
        double poly;
        Pt px, pxi;
        eval(x, xi, poly, px, pxi);
        return cplx(std::exp(-0.5 * (x.squaredNorm() + xi.squaredNorm())) * poly);
      },
      label);
  f.with_gradient([eval](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
    double poly;
    Pt px, pxi;
    eval(x, xi, poly, px, pxi);
    const double e = std::exp(-0.5 * (x.squaredNorm() + xi.squaredNorm()));
    gx = (e * (px - poly * x)).cast<cplx>();
    gxi = (e * (pxi - poly * xi)).cast<cplx>();
  });
  f.with_real(true);
  return f;
}

}  // namespace

Symbol symbol_preset(const std::string& spec, int dim) {
  const auto [kind, args] = split_head(spec);
  if (kind == "gaussian") {
    const auto v = args.empty() ? std::vector<double>{1.0} : parse_list(args, "gaussian symbol");
    Pt x0 = Pt::Zero(dim), xi0 = Pt::Zero(dim);
    if (v.size() == static_cast<std::size_t>(2 * dim + 1)) {
      for (int d = 0; d < dim; ++d) {
        x0(d) = v[static_cast<std::size_t>(d)];
        xi0(d) = v[static_cast<std::size_t>(dim + d)];
      }
    } else {
      require(v.size() == 1, "gaussian symbol: expected width or 2N centre coordinates plus width");
    }
    return gaussian_symbol(dim, x0, xi0, v.back(), spec);
  }
  if (kind == "coordinate") {
    require(args.size() >= 3 && (args[0] == 'q' || args[0] == 'p') && args[1] == '_',
            "coordinate symbol: expected q_j or p_j");
    const int j = static_cast<int>(parse_one(args.substr(2), "coordinate symbol")) - 1;
    require(j >= 0 && j < dim, "coordinate symbol: index out of range");
    const bool q = args[0] == 'q';
    Symbol f(dim, [q, j](const Pt& x, const Pt& xi) { return cplx(q ? x(j) : xi(j)); }, spec);
    f.with_gradient([q, j, dim](const Pt&, const Pt&, CVec& gx, CVec& gxi) {
      gx = CVec::Zero(dim);
      gxi = CVec::Zero(dim);
      (q ? gx : gxi)(j) = 1.0;
    });
    return f.with_real(true);
  }
  if (kind == "harmonic" || kind == "kinetic") {
    require(args.empty(), kind + " symbol takes no arguments");
    const bool with_x = kind == "harmonic";
    Symbol f(
        dim,
        [with_x](const Pt& x, const Pt& xi) { return cplx(xi.squaredNorm() + (with_x ? x.squaredNorm() : 0.0)); },
        spec);
    f.with_gradient([with_x](const Pt& x, const Pt& xi, CVec& gx, CVec& gxi) {
      gx = with_x ? CVec((2.0 * x).cast<cplx>()) : CVec(CVec::Zero(x.size()));
      gxi = (2.0 * xi).cast<cplx>();
    });
    return f.with_real(true);
  }
  if (kind == "constant") {
    const double c = parse_one(args, "constant symbol");
    Symbol f(dim, [c](const Pt&, const Pt&) { return cplx(c); }, spec);
    f.with_gradient([dim](const Pt&, const Pt&, CVec& gx, CVec& gxi) {
      gx = CVec::Zero(dim);
      gxi = CVec::Zero(dim);
    });
    return f.with_real(true).with_sup(std::abs(c));
  }
  if (kind == "random_bandlimited") {
    const double s = parse_one(args, "random_bandlimited symbol");
    require(s >= 0.0 && s == std::floor(s), "random_bandlimited: seed must be a nonnegative integer");
    return random_bandlimited(dim, static_cast<unsigned>(s), spec);
  }
  throw ContractViolation("unknown symbol preset '" + spec + "'");
}

FiducialVector fiducial_preset(const std::string& spec, int dim) {
  const auto [kind, args] = split_head(spec);
  if (kind == "gaussian") return FiducialVector::gaussian(dim, args.empty() ? 1.0 : parse_one(args, "fiducial"));
  if (kind == "odd_perturbed") return FiducialVector::odd_perturbed(dim, parse_one(args, "fiducial"));
  throw ContractViolation("unknown fiducial preset '" + spec + "'");
}

KernelFunction gaussian_kernel(int dim, const Pt& x0, double a, const Pt& w0, double b, const Pt& k) {
  const double a2 = a * a, b2 = b * b;
  KernelFunction F(
      dim,
      [x0, w0, a2, b2, k](const Pt& x, const Pt& w) {
        return std::exp(-(x - x0).squaredNorm() / (2.0 * a2) - (w - w0).squaredNorm() / (2.0 * b2)) *
               std::exp(kI * k.dot(w));
      },
      "gaussian_kernel");
  F.with_x_gradient([x0, w0, a2, b2, k](const Pt& x, const Pt& w, CVec& gx, CVec&) {
    const cplx v = std::exp(-(x - x0).squaredNorm() / (2.0 * a2) - (w - w0).squaredNorm() / (2.0 * b2)) *
                   std::exp(kI * k.dot(w));
    gx = ((-1.0 / a2) * (x - x0)).cast<cplx>() * v;
  });
  return F;
}

}  // namespace magq
