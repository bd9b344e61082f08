#include "sruq/astro/sampling.hpp"

#include <cmath>

#include "sruq/errors.hpp"
#include "sruq/rng.hpp"

namespace sruq::astro {

Eigen::MatrixXd cholesky_sampling_factor(const Eigen::MatrixXd& covariance) {
  const Eigen::Index m = covariance.rows();
  if (covariance.cols() != m) throw ContractError("cholesky: covariance must be square");
  if (!covariance.isApprox(covariance.transpose(), 1e-10))
    throw ContractError("cholesky: covariance must be symmetric");
  const double trace = covariance.trace();
  const double negative_floor = -1e-12 * std::max(trace, 0.0);

  // Unpivoted lower Cholesky with zeroed semidefinite directions, so a
  // diagonal covariance maps input j straight to component j.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double pivot = covariance(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < negative_floor)
      throw NumericalError("cholesky: covariance is not positive semidefinite");
    const double zero_tol = 1e-14 * std::max(trace, 1e-300);
    if (pivot <= zero_tol) {
      l.row(j).setZero();  // degenerate direction contributes nothing
      continue;
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < m; ++i)
      l(i, j) = (covariance(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return l;
}

InitialStateSamples sample_initial_states(const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& covariance,
                                          Eigen::Index n, std::uint64_t seed, int workers) {
  if (n < 1) throw ContractError("sample_initial_states: n must be >= 1");
  if (mean.size() != covariance.rows())
    throw ContractError("sample_initial_states: mean/covariance size mismatch");
  const Eigen::MatrixXd l = cholesky_sampling_factor(covariance);
  InitialStateSamples out;
  out.xi = sruq::standard_normal_matrix(n, mean.size(), seed, workers);
  out.states = (out.xi * l.transpose()).rowwise() + mean.transpose();
  return out;
}

}  // namespace sruq::astro
