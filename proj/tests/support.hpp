#pragma once

#include "riskfp/bench.hpp"
#include "riskfp/rng.hpp"
#include "riskfp/types.hpp"

namespace testing {

using riskfp::CovarianceMatrix;
using riskfp::Matrix;
using riskfp::Vector;
using riskfp::Weights;

// Covariance matrix of the five-asset example.
inline Matrix example_matrix() {
  Matrix v(5, 5);
  v << 0.1137, -0.0289, 0.0295, 0.0279, 0.0437,
      -0.0289, 0.0255, -0.0337, -0.0156, -0.0159,
       0.0295, -0.0337, 0.1002, 0.0068, 0.0427,
       0.0279, -0.0156, 0.0068, 0.0281, 0.0262,
       0.0437, -0.0159, 0.0427, 0.0262, 0.0884;
  return v;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline CovarianceMatrix diag_cov(std::initializer_list<double> d) {
  return CovarianceMatrix(Matrix(vec(d).asDiagonal()));
}

inline CovarianceMatrix random_spd(Eigen::Index n, std::uint64_t seed) {
  riskfp::InstanceSpec spec;
  spec.n = n;
  spec.seed = seed;
  return riskfp::gen_spd(spec);
}

// Entrywise-independent oracle for D(x) written with explicit loops.
inline Vector delta_oracle(const Matrix& v, const Vector& b, const Vector& x) {
  const auto n = x.size();
  Vector vx = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) vx(i) += v(i, j) * x(j);
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += x(i) * vx(i);
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = x(i) * vx(i) - s * b(i);
  return d;
}

}  // namespace testing
