#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace riskfp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Caller broke a documented precondition (usually a dimension mismatch).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A vector failed the simplex / interior checks of `Weights`.
class InvalidWeightsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A risk budget that is not strictly inside the simplex.
class InvalidBudgetError : public InvalidWeightsError {
 public:
  using InvalidWeightsError::InvalidWeightsError;
};

/// A matrix that cannot serve as a covariance matrix.
class InvalidMatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Contribution vector whose entries sum to zero.
class NormalizationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Polynomial with every coefficient equal to zero.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kSimplexSumTol = 1e-12;
inline constexpr double kSimplexFloorTol = 1e-12;

/// A point of the unit simplex: a portfolio, a risk budget or a start point.
///
/// Entries sum to one within `kSimplexSumTol`. `Support::Simplex` admits
/// boundary points (entries down to `-kSimplexFloorTol`); `Support::Interior`
/// requires every entry to be strictly positive.
class Weights {
 public:
  enum class Support { Simplex, Interior };

  static Weights simplex(Vector entries);
  static Weights interior(Vector entries);
  static Weights uniform(Index n);

  const Vector& values() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.size(); }
  double operator[](Index i) const { return entries_(i); }
  Support support() const noexcept { return support_; }

  /// True when every entry is strictly positive, whatever the tag.
  bool is_interior() const noexcept;

 private:
  Weights(Vector entries, Support support);

  Vector entries_;
  Support support_;
};

/// Symmetric positive-definite matrix, validated at construction.
class CovarianceMatrix {
 public:
  /// Throws InvalidMatrixError when `data` is not square, not finite, not
  /// symmetric within 1e-10 (relative to its largest entry) or not positive
  /// definite.
  explicit CovarianceMatrix(Matrix data);

  Index dim() const noexcept { return data_.rows(); }
  const Matrix& matrix() const noexcept { return data_; }
  double operator()(Index i, Index j) const { return data_(i, j); }

  /// Eigenvalues in ascending order.
  Vector eigenvalues() const;

 private:
  Matrix data_;
};

using ContributionVector = Vector;

}  // namespace riskfp
