#pragma once

#include <Eigen/Core>

namespace sruq {

/// Univariate polynomial basis: the first `degree_count` orthonormal
/// probabilists' Hermite polynomials. Basis function p (1-based) has degree
/// p-1 and unit variance under the standard normal measure, so
/// E[psi_p(xi) psi_q(xi)] = delta_pq for xi ~ N(0,1). psi_1 is identically 1.
struct BasisSpec {
  int degree_count = 1;  // P >= 1
};

/// Evaluates [psi_1(xi), ..., psi_P(xi)] by the normalized three-term
/// recurrence psi_{n+1} = (xi psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1).
/// Throws ContractError for P < 1, NumericalError for non-finite xi.
Eigen::VectorXd eval_basis(const BasisSpec& spec, double xi);

/// Evaluates the univariate factor sum_p coeffs[p] psi_p(xi).
/// Throws ContractError when coeffs.size() != P.
double eval_factor(const BasisSpec& spec, const Eigen::VectorXd& coeffs, double xi);

/// N x P matrix whose row j holds eval_basis at points[j].
Eigen::MatrixXd eval_basis_rows(const BasisSpec& spec, const Eigen::VectorXd& points);

}  // namespace sruq
