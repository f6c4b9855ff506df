#pragma once

#include "riskfp/types.hpp"

#include <functional>

namespace riskfp {

/// Marginal risk contributions of a generic risk measure. Must be continuous
/// on the interior of the simplex; stddev_provider() is the shipped instance.
using ContributionProvider = std::function<ContributionVector(const Vector&)>;

/// RC(x) = diag(x) V x. `x` need not lie on the simplex.
ContributionVector contributions_stddev(const CovarianceMatrix& V, const Vector& x);

/// x' V x, the squared portfolio volatility (Euler sum of the contributions).
double total_risk_sq(const CovarianceMatrix& V, const Vector& x);

/// rc / sum(rc). Throws NormalizationError when the sum is zero.
Vector normalized_contributions(const ContributionVector& rc);

/// || RC(x) / 1'RC(x) - b ||_2, zero exactly at the risk-budgeting portfolio.
double accuracy(const CovarianceMatrix& V, const Vector& x, const Weights& b);

ContributionProvider stddev_provider(CovarianceMatrix V);

}  // namespace riskfp
