#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace magq {

using cplx = std::complex<double>;

// Points live on the stack; runtime dimension is at most 3.
using Pt = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

inline Pt make_pt(std::initializer_list<double> xs) {
  Pt p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

inline Pt zero_pt(int n) { return Pt::Zero(n); }

const char* version_string();

}  // namespace magq
