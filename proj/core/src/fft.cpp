#include "magq/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace magq {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// FFTW planning is not thread-safe; execution on a private plan is.
void run_many(cplx* data, int dim, int M, int howmany, int stride, int dist, int sign) {
  std::vector<int> n(static_cast<std::size_t>(dim), M);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    p = fftw_plan_many_dft(dim, n.data(), howmany, d, nullptr, stride, dist, d, nullptr, stride,
                           dist, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  require(p != nullptr, "fftw planning failed");
  fftw_execute(p);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(p);
}

}  // namespace

void dft_rows(CMat& a, int dim, int M, int sign) {
  require(a.cols() == ipow(M, dim), "dft_rows: column count must be M^dim");
  if (a.rows() == 0) return;
  // Column-major storage: a row is strided by rows(), consecutive rows are 1 apart.
  run_many(a.data(), dim, M, static_cast<int>(a.rows()), static_cast<int>(a.rows()), 1, sign);
}

void dft_vector(CVec& a, int dim, int M, int sign) {
  require(a.size() == ipow(M, dim), "dft_vector: size must be M^dim");
  run_many(a.data(), dim, M, 1, 1, 0, sign);
}

void centered_dft_rows(CMat& a, int dim, int M, int sign) {
  require(M % 2 == 0, "centered_dft_rows: M must be even");
  const int total = ipow(M, dim);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  std::vector<double> parity(static_cast<std::size_t>(total));
  for (int f = 0; f < total; ++f) {
    unflatten(f, dim, M, idx.data());
    int s = 0;
    for (int d = 0; d < dim; ++d) s += idx[d];
    parity[static_cast<std::size_t>(f)] = (s % 2 == 0) ? 1.0 : -1.0;
  }
  // exp(i s 2pi (m-M/2)(k-M/2)/M) = (-1)^m (-1)^k (-1)^{M/2} exp(i s 2pi m k / M)
  const double global = ((dim * (M / 2)) % 2 == 0) ? 1.0 : -1.0;
  for (int f = 0; f < total; ++f) a.col(f) *= parity[static_cast<std::size_t>(f)];
  dft_rows(a, dim, M, sign);
  for (int f = 0; f < total; ++f) a.col(f) *= parity[static_cast<std::size_t>(f)] * global;
}

}  // namespace magq
