#include "riskfp/types.hpp"

#include <cmath>
#include <sstream>

namespace riskfp {

namespace {

std::string describe_sum(double sum) {
  std::ostringstream os;
  os.precision(17);
  os << "entries sum to " << sum << ", expected 1";
  return os.str();
}

}  // namespace

Weights::Weights(Vector entries, Support support)
    : entries_(std::move(entries)), support_(support) {
  if (entries_.size() == 0) throw InvalidWeightsError("weights: empty vector");
  if (!entries_.allFinite()) throw InvalidWeightsError("weights: non-finite entry");
  const double sum = entries_.sum();
  if (std::abs(sum - 1.0) > kSimplexSumTol) {
    throw InvalidWeightsError("weights: not on the simplex, " + describe_sum(sum));
  }
  for (Index i = 0; i < entries_.size(); ++i) {
    const double v = entries_(i);
    if (support_ == Support::Interior ? !(v > 0.0) : v < -kSimplexFloorTol) {
      std::ostringstream os;
      os << "weights: entry " << i << " = " << v
         << (support_ == Support::Interior ? " is not strictly positive" : " is negative");
      throw InvalidWeightsError(os.str());
    }
  }
}

Weights Weights::simplex(Vector entries) { return Weights(std::move(entries), Support::Simplex); }

Weights Weights::interior(Vector entries) {
  return Weights(std::move(entries), Support::Interior);
}

Weights Weights::uniform(Index n) {
  if (n < 1) throw InvalidWeightsError("weights: uniform needs n >= 1");
  return Weights(Vector::Constant(n, 1.0 / static_cast<double>(n)), Support::Interior);
}

bool Weights::is_interior() const noexcept { return (entries_.array() > 0.0).all(); }

CovarianceMatrix::CovarianceMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.rows() != data_.cols()) {
    std::ostringstream os;
    os << "covariance: expected a non-empty square matrix, got " << data_.rows() << "x"
       << data_.cols();
    throw InvalidMatrixError(os.str());
  }
  if (!data_.allFinite()) throw InvalidMatrixError("covariance: non-finite entry");

  const double scale = data_.cwiseAbs().maxCoeff();
  const double asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    std::ostringstream os;
    os << "covariance: not symmetric (max |V - V'| = " << asym << ")";
    throw InvalidMatrixError(os.str());
  }

  const double lambda_min = eigenvalues()(0);
  if (!(lambda_min > 0.0)) {
    std::ostringstream os;
    os << "covariance: not positive definite (smallest eigenvalue " << lambda_min << ")";
    throw InvalidMatrixError(os.str());
  }
}

Vector CovarianceMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace riskfp
