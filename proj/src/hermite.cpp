#include "sruq/hermite.hpp"

#include <cmath>

#include "sruq/errors.hpp"

namespace sruq {

Eigen::VectorXd eval_basis(const BasisSpec& spec, double xi) {
  if (spec.degree_count < 1) throw ContractError("BasisSpec: degree_count must be >= 1");
  if (!std::isfinite(xi)) throw NumericalError("eval_basis: non-finite input");
  const int p = spec.degree_count;
  Eigen::VectorXd psi(p);
  psi(0) = 1.0;
  if (p == 1) return psi;
  psi(1) = xi;
  for (int n = 1; n + 1 < p; ++n)
    psi(n + 1) = (xi * psi(n) - std::sqrt(static_cast<double>(n)) * psi(n - 1)) /
                 std::sqrt(static_cast<double>(n + 1));
  return psi;
}

double eval_factor(const BasisSpec& spec, const Eigen::VectorXd& coeffs, double xi) {
  if (coeffs.size() != spec.degree_count)
    throw ContractError("eval_factor: coefficient count does not match degree_count");
  return eval_basis(spec, xi).dot(coeffs);
}

Eigen::MatrixXd eval_basis_rows(const BasisSpec& spec, const Eigen::VectorXd& points) {
  if (spec.degree_count < 1) throw ContractError("BasisSpec: degree_count must be >= 1");
  const int p = spec.degree_count;
  const Eigen::Index n = points.size();
  Eigen::MatrixXd out(n, p);
  out.col(0).setOnes();
  if (p == 1) return out;
  out.col(1) = points;
  for (int k = 1; k + 1 < p; ++k) {
    const double a = std::sqrt(static_cast<double>(k));
    const double b = std::sqrt(static_cast<double>(k + 1));
    out.col(k + 1) = (points.cwiseProduct(out.col(k)) - a * out.col(k - 1)) / b;
  }
  for (Eigen::Index j = 0; j < n; ++j)
    if (!std::isfinite(points(j))) throw NumericalError("eval_basis_rows: non-finite input");
  return out;
}

}  // namespace sruq
