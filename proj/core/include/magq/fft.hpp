#pragma once

#include "magq/common.hpp"

namespace magq {

// Unnormalized multi-dimensional DFT, sum_m exp(sign 2 pi i m.k / M) a_m, applied to
// every row of `a` (row-major flattened N-dimensional array of side M).
void dft_rows(CMat& a, int dim, int M, int sign);
void dft_vector(CVec& a, int dim, int M, int sign);

// Same transform for arrays indexed by centred integers m, k in [-M/2, M/2).
void centered_dft_rows(CMat& a, int dim, int M, int sign);

// Multi-index helpers for row-major flattening, last axis fastest.
inline int flat_index(const int* idx, int dim, int M) {
  int f = 0;
  for (int d = 0; d < dim; ++d) f = f * M + idx[d];
  return f;
}
inline void unflatten(int f, int dim, int M, int* idx) {
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = f % M;
    f /= M;
  }
}
inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace magq
