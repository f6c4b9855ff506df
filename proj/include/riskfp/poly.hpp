#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace riskfp {

/// Real polynomial c0 + c1 k + c2 k^2 + ... (ascending coefficients).
/// The leading coefficient may be zero; root finding reduces the degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}
  Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {}

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  bool is_zero() const noexcept;

  double operator()(double k) const noexcept;

 private:
  std::vector<double> coeffs_;
};

/// Horner evaluation.
double eval(const Polynomial& p, double k) noexcept;

/// Distinct real roots in ascending order.
///
/// Leading coefficients below 1e-14 * max|c| are dropped before solving; roots
/// come from the eigenvalues of the companion matrix, keeping those whose
/// imaginary part is at most 1e-8 * (1 + |re|), then polished by Newton steps.
/// Double roots, which the eigenvalues resolve only to about 1e-8, are located
/// as critical points where p vanishes. Roots closer than 1e-10 (relative) are
/// merged. Throws DegenerateError when
/// every coefficient is zero.
std::vector<double> real_roots(const Polynomial& p);

}  // namespace riskfp
