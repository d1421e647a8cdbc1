#include "magq/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "magq/common.hpp"

namespace magq {

SegmentRule SegmentRule::gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: order must be positive");
  SegmentRule r;
  r.order = n;
  // Boost returns the nonnegative zeros of P_n in ascending order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x, w;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    if (z == 0.0) {
      x.push_back(0.0);
      w.push_back(wt);
    } else {
      x.push_back(z);
      w.push_back(wt);
      x.push_back(-z);
      w.push_back(wt);
    }
  }
  r.nodes.resize(x.size());
  r.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.nodes[i] = 0.5 * (x[i] + 1.0);
    r.weights[i] = 0.5 * w[i];
  }
  return r;
}

SimplexRule SimplexRule::gauss_legendre(int n) {
  const SegmentRule s = SegmentRule::gauss_legendre(n);
  SimplexRule r;
  r.order = n;
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    for (std::size_t j = 0; j < s.nodes.size(); ++j) {
      r.mu.push_back(s.nodes[i]);
      r.nu.push_back(s.nodes[j]);
      r.weights.push_back(s.weights[i] * s.weights[j] * s.nodes[i]);
    }
  return r;
}

const SegmentRule& default_segment_rule() {
  static const SegmentRule r = SegmentRule::gauss_legendre(32);
  return r;
}

const SimplexRule& default_simplex_rule() {
  static const SimplexRule r = SimplexRule::gauss_legendre(16);
  return r;
}

}  // namespace magq
