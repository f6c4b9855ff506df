#include "riskfp/risk_measure.hpp"

#include <cmath>
#include <sstream>

namespace riskfp {

namespace {

void require_dim(const CovarianceMatrix& V, const Vector& x, const char* what) {
  if (V.dim() != x.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (covariance " << V.dim() << ", vector " << x.size()
       << ")";
    throw ContractViolation(os.str());
  }
}

}  // namespace

ContributionVector contributions_stddev(const CovarianceMatrix& V, const Vector& x) {
  require_dim(V, x, "contributions_stddev");
  return x.cwiseProduct(V.matrix() * x);
}

double total_risk_sq(const CovarianceMatrix& V, const Vector& x) {
  require_dim(V, x, "total_risk_sq");
  return x.dot(V.matrix() * x);
}

Vector normalized_contributions(const ContributionVector& rc) {
  const double sum = rc.sum();
  if (sum == 0.0 || !std::isfinite(sum)) {
    throw NormalizationError("normalized_contributions: contributions sum to zero");
  }
  return rc / sum;
}

double accuracy(const CovarianceMatrix& V, const Vector& x, const Weights& b) {
  require_dim(V, x, "accuracy");
  if (b.size() != x.size()) throw ContractViolation("accuracy: budget dimension mismatch");
  return (normalized_contributions(contributions_stddev(V, x)) - b.values()).norm();
}

ContributionProvider stddev_provider(CovarianceMatrix V) {
  return [V = std::move(V)](const Vector& x) { return contributions_stddev(V, x); };
}

}  // namespace riskfp
