#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sruq/errors.hpp"
#include "sruq/hermite.hpp"
#include "support/gauss_hermite.hpp"

using sruq::BasisSpec;
using sruq::eval_basis;
using sruq::eval_factor;

TEST_CASE("basis values at zero") {
  const Eigen::VectorXd psi = eval_basis(BasisSpec{3}, 0.0);
  CHECK(psi(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(psi(2) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("degree-one basis is the identity map") {
  const Eigen::VectorXd psi = eval_basis(BasisSpec{2}, 1.5);
  CHECK(psi(0) == 1.0);
  CHECK(psi(1) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("matches Gram-Schmidt construction at xi = 2") {
  const auto quad = oracle::gauss_hermite_probabilists(64);
  const Eigen::MatrixXd ortho = oracle::gram_schmidt_orthonormal(5, quad);
  const Eigen::VectorXd psi = eval_basis(BasisSpec{5}, 2.0);
  for (int k = 0; k < 5; ++k) {
    const double expected = oracle::eval_monomial(ortho.row(k).transpose(), 2.0);
    CHECK(psi(k) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("orthonormality under 64-point quadrature up to P = 8") {
  const auto quad = oracle::gauss_hermite_probabilists(64);
  const int p = 8;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  for (int j = 0; j < quad.nodes.size(); ++j) {
    const Eigen::VectorXd psi = eval_basis(BasisSpec{p}, quad.nodes(j));
    gram += quad.weights(j) * psi * psi.transpose();
  }
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      CHECK(gram(a, b) == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("recurrence agrees with closed forms for degrees 0-4") {
  for (double xi = -4.0; xi <= 4.0; xi += 0.25) {
    const Eigen::VectorXd psi = eval_basis(BasisSpec{5}, xi);
    CHECK(psi(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi(1) == doctest::Approx(xi).epsilon(1e-12));
    CHECK(psi(2) == doctest::Approx((xi * xi - 1.0) / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(psi(3) ==
          doctest::Approx((xi * xi * xi - 3.0 * xi) / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(psi(4) == doctest::Approx((xi * xi * xi * xi - 6.0 * xi * xi + 3.0) /
                                    std::sqrt(24.0))
                        .epsilon(1e-12));
  }
}

TEST_CASE("factor evaluation") {
  Eigen::VectorXd constant(2);
  constant << 3.0, 0.0;
  CHECK(eval_factor(BasisSpec{2}, constant, 0.37) == doctest::Approx(3.0));
  CHECK(eval_factor(BasisSpec{2}, constant, -2.2) == doctest::Approx(3.0));

  Eigen::VectorXd identity(2);
  identity << 0.0, 1.0;
  CHECK(eval_factor(BasisSpec{2}, identity, -0.7) == doctest::Approx(-0.7));

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  const Eigen::VectorXd psi = eval_basis(BasisSpec{4}, 0.5);
  CHECK(eval_factor(BasisSpec{4}, ones, 0.5) == doctest::Approx(psi.sum()).epsilon(1e-14));
}

TEST_CASE("factor evaluation is linear in the coefficients") {
  std::mt19937_64 engine(99);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = normal(engine);
      b(i) = normal(engine);
    }
    const double alpha = normal(engine);
    const double xi = 2.0 * normal(engine);
    const double lhs = eval_factor(BasisSpec{6}, a + alpha * b, xi);
    const double rhs =
        eval_factor(BasisSpec{6}, a, xi) + alpha * eval_factor(BasisSpec{6}, b, xi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(eval_basis(BasisSpec{0}, 0.0), sruq::ContractError);
  CHECK_THROWS_AS(eval_basis(BasisSpec{3}, std::nan("")), sruq::NumericalError);
  Eigen::VectorXd short_coeffs(2);
  short_coeffs << 1.0, 2.0;
  CHECK_THROWS_AS(eval_factor(BasisSpec{3}, short_coeffs, 0.0), sruq::ContractError);
}
