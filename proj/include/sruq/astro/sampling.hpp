#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace sruq::astro {

struct InitialStateSamples {
  Eigen::MatrixXd xi;      // N x d standard-normal inputs
  Eigen::MatrixXd states;  // N x M mapped initial samples mean + L xi
};

/// Gaussian initial-state sampling through an unpivoted Cholesky factor of
/// the covariance, so diagonal covariances keep the natural association
/// xi_j -> component j. Semidefinite directions (pivot below roundoff) are
/// zeroed; a pivot more negative than -1e-12 * trace is a decomposition
/// error. Deterministic in the seed.
InitialStateSamples sample_initial_states(const Eigen::VectorXd& mean,
                                          const Eigen::MatrixXd& covariance,
                                          Eigen::Index n, std::uint64_t seed,
                                          int workers = 1);

/// The lower-triangular factor used above (exposed for tests).
Eigen::MatrixXd cholesky_sampling_factor(const Eigen::MatrixXd& covariance);

}  // namespace sruq::astro
