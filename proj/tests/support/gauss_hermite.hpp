#pragma once

// Quadrature and Gram-Schmidt oracles for checking the Hermite basis against
// an implementation-independent construction.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // sums to 1 (standard normal measure)
};

// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite recurrence
// (off-diagonal sqrt(n)); exact for polynomials up to degree 2n-1.
inline Quadrature gauss_hermite_probabilists(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(static_cast<double>(i));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  Quadrature q;
  q.nodes = eig.eigenvalues();
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double first = eig.eigenvectors()(0, i);
    q.weights(i) = first * first;
  }
  return q;
}

// Monomial coefficient rows of the first `count` orthonormal polynomials
// under the standard normal weight, built by Gram-Schmidt with quadrature
// inner products. Row k holds the coefficients of x^0..x^{count-1}.
inline Eigen::MatrixXd gram_schmidt_orthonormal(int count, const Quadrature& quad) {
  const int n = static_cast<int>(quad.nodes.size());
  // Vandermonde of monomials at the quadrature nodes.
  Eigen::MatrixXd vander(n, count);
  for (int j = 0; j < n; ++j) {
    double power = 1.0;
    for (int k = 0; k < count; ++k) {
      vander(j, k) = power;
      power *= quad.nodes(j);
    }
  }
  auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd fa = vander * a;
    const Eigen::VectorXd fb = vander * b;
    return (quad.weights.array() * fa.array() * fb.array()).sum();
  };

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(count, count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(count);
    v(k) = 1.0;  // start from x^k
    for (int prev = 0; prev < k; ++prev) {
      const Eigen::VectorXd u = basis.row(prev).transpose();
      v -= inner(u, v) * u;
    }
    v /= std::sqrt(inner(v, v));
    basis.row(k) = v.transpose();
  }
  return basis;
}

inline double eval_monomial(const Eigen::VectorXd& coeffs, double x) {
  double value = 0.0;
  double power = 1.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    value += coeffs(k) * power;
    power *= x;
  }
  return value;
}

}  // namespace oracle
