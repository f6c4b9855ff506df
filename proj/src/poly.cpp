#include "riskfp/poly.hpp"

#include "riskfp/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>

namespace riskfp {

namespace {

double derivative_at(std::span<const double> c, double k) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) acc = acc * k + static_cast<double>(i) * c[i];
  return acc;
}

double horner(std::span<const double> c, double k) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * k + c[i];
  return acc;
}

double polish(std::span<const double> c, double root) {
  double best = root;
  double best_res = std::abs(horner(c, root));
  for (int it = 0; it < 8 && best_res > 0.0; ++it) {
    const double d = derivative_at(c, best);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = best - horner(c, best) / d;
    const double res = std::abs(horner(c, next));
    if (!(res < best_res)) break;
    best = next;
    best_res = res;
  }
  return best;
}

// Critical point of the monic, scaled polynomial c near t0 (Newton on c'),
// returned when c vanishes there to working precision.
std::optional<double> double_root(std::span<const double> c, double t0) {
  std::vector<double> dc(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = static_cast<double>(i) * c[i];
  double t = t0;
  for (int it = 0; it < 30; ++it) {
    const double d2 = derivative_at(dc, t);
    if (d2 == 0.0 || !std::isfinite(d2)) break;
    const double step = horner(dc, t) / d2;
    t -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(t))) break;
  }
  if (!std::isfinite(t) || std::abs(t - t0) > 1e-3 * (1.0 + std::abs(t0))) return std::nullopt;
  double mag = 0.0;
  double tp = 1.0;
  for (double ci : c) {
    mag += std::abs(ci) * tp;
    tp *= std::abs(t);
  }
  if (std::abs(horner(c, t)) > 1e-12 * mag) return std::nullopt;
  return t;
}

}  // namespace

bool Polynomial::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double Polynomial::operator()(double k) const noexcept { return horner(coeffs_, k); }

double eval(const Polynomial& p, double k) noexcept { return p(k); }

std::vector<double> real_roots(const Polynomial& p) {
  if (p.is_zero()) throw DegenerateError("real_roots: all coefficients are zero");

  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();

  const std::size_t degree = c.size() - 1;
  std::vector<double> roots;
  if (degree == 0) return roots;
  if (degree == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  // Substitute k = s t so that the monic polynomial in t has roots of order one.
  const double lead = c[degree];
  double s = 0.0;
  for (std::size_t i = 0; i < degree; ++i) {
    if (c[i] == 0.0) continue;
    s = std::max(s, std::pow(std::abs(c[i] / lead), 1.0 / static_cast<double>(degree - i)));
  }
  if (s == 0.0) {
    roots.push_back(0.0);
    return roots;
  }

  const auto d = static_cast<Index>(degree);
  Matrix companion = Matrix::Zero(d, d);
  for (Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  double scale_pow = 1.0;
  for (Index i = 0; i < d; ++i) {
    companion(i, d - 1) = -c[static_cast<std::size_t>(i)] * scale_pow / (lead * std::pow(s, d));
    scale_pow *= s;
  }

  // Monic polynomial in t; its coefficients are bounded by one in magnitude.
  std::vector<double> scaled(degree + 1);
  for (Index i = 0; i < d; ++i) scaled[static_cast<std::size_t>(i)] = -companion(i, d - 1);
  scaled[degree] = 1.0;

  Eigen::EigenSolver<Matrix> es(companion, false);
  for (const auto& z : es.eigenvalues()) {
    const double re = z.real() * s;
    const double im = z.imag() * s;
    if (std::abs(im) <= 1e-8 * (1.0 + std::abs(re))) {
      roots.push_back(polish(c, re));
    } else if (z.imag() > 0.0 && std::abs(z.imag()) <= 1e-4 * (1.0 + std::abs(z.real()))) {
      // A double root splits into a nearly real conjugate pair; keep it when
      // the nearby critical point is a root.
      if (auto t = double_root(scaled, z.real())) roots.push_back(*t * s);
    }
  }

  // Close neighbours may be the two halves of one double root.
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i] - roots[i - 1] > 1e-7 * std::max(1.0, std::abs(roots[i]))) continue;
    if (auto t = double_root(scaled, 0.5 * (roots[i] + roots[i - 1]) / s)) {
      roots[i - 1] = roots[i] = *t * s;
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> distinct;
  for (double r : roots) {
    if (!distinct.empty() &&
        std::abs(r - distinct.back()) <= 1e-10 * std::max(1.0, std::abs(r))) {
      if (std::abs(horner(c, r)) < std::abs(horner(c, distinct.back()))) distinct.back() = r;
      continue;
    }
    distinct.push_back(r);
  }
  return distinct;
}

}  // namespace riskfp
