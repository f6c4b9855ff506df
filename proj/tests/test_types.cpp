#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace riskfp;
using testing::vec;

TEST_CASE("weights accept simplex points and tag the support") {
  const auto w = Weights::simplex(vec({0.25, 0.75, 0.0}));
  CHECK(w.size() == 3);
  CHECK(w.support() == Weights::Support::Simplex);
  CHECK_FALSE(w.is_interior());
  CHECK(w[1] == doctest::Approx(0.75));

  const auto u = Weights::uniform(4);
  CHECK(u.support() == Weights::Support::Interior);
  CHECK(u.is_interior());
  CHECK(u.values().sum() == doctest::Approx(1.0));
}

TEST_CASE("weights reject sums away from one") {
  CHECK_THROWS_AS(Weights::simplex(vec({0.5, 0.6})), InvalidWeightsError);
  CHECK_THROWS_AS(Weights::simplex(vec({0.5, 0.5 + 1e-10})), InvalidWeightsError);
  CHECK_NOTHROW(Weights::simplex(vec({0.5, 0.5 + 1e-13})));
}

TEST_CASE("weights enforce the entry floor") {
  CHECK_NOTHROW(Weights::simplex(vec({1.0 + 5e-13, -5e-13})));
  CHECK_THROWS_AS(Weights::simplex(vec({1.1, -0.1})), InvalidWeightsError);
  CHECK_THROWS_AS(Weights::interior(vec({1.0, 0.0})), InvalidWeightsError);
  CHECK_THROWS_AS(Weights::simplex(Vector()), InvalidWeightsError);
  CHECK_THROWS_AS(Weights::simplex(vec({std::nan(""), 1.0})), InvalidWeightsError);
}

TEST_CASE("covariance validation names the failed check") {
  Matrix rect(2, 3);
  rect.setOnes();
  CHECK_THROWS_WITH_AS(CovarianceMatrix{rect}, doctest::Contains("square"), InvalidMatrixError);

  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_WITH_AS(CovarianceMatrix{asym}, doctest::Contains("symmetric"),
                       InvalidMatrixError);

  Matrix indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_WITH_AS(CovarianceMatrix{indef}, doctest::Contains("positive definite"),
                       InvalidMatrixError);

  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(CovarianceMatrix{singular}, InvalidMatrixError);

  Matrix inf = Matrix::Identity(2, 2);
  inf(0, 0) = INFINITY;
  CHECK_THROWS_AS(CovarianceMatrix{inf}, InvalidMatrixError);
}

TEST_CASE("covariance tolerates rounding-level asymmetry") {
  Matrix m(2, 2);
  m << 2.0, 0.5, 0.5 + 1e-12, 1.0;
  CHECK_NOTHROW(CovarianceMatrix{m});
}

TEST_CASE("example matrix eigenvalues") {
  const CovarianceMatrix V(testing::example_matrix());
  const Vector ev = V.eigenvalues();
  const Vector printed = vec({0.0031, 0.0215, 0.0515, 0.0802, 0.1996});
  for (Index i = 0; i < 5; ++i) CHECK(std::abs(ev(i) - printed(i)) <= 5e-5);
}
