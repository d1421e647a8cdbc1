#pragma once

#include <vector>

namespace magq {

// Gauss-Legendre nodes/weights mapped to [0,1].
struct SegmentRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  static SegmentRule gauss_legendre(int n);
};

// Tensor rule on the unit square (mu, nu); the weight already includes the
// Jacobian factor mu, so the weights sum to 1/2.
struct SimplexRule {
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> weights;
  int order = 0;

  static SimplexRule gauss_legendre(int n);
};

const SegmentRule& default_segment_rule();  // 32 points
const SimplexRule& default_simplex_rule();  // 16 x 16 points

}  // namespace magq
