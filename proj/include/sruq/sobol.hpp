#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sruq/model.hpp"

namespace sruq {

/// First-order Sobol indices S_{i,m} = V(E(q_m | xi_i)) / V(q_m) of every
/// QoI with respect to every input, estimated by Monte Carlo on the
/// surrogate with the analytic mean and variance as exact normalizers.
struct SobolResult {
  Eigen::MatrixXd indices;       // d x M
  std::int64_t n_samples = 0;
  std::uint64_t seed_a = 0;
  std::uint64_t seed_b = 0;
  Eigen::VectorXd variance;      // M, denominators
  std::vector<bool> degenerate;  // per QoI: variance == 0, index defined zero
};

/// Pick-and-freeze estimator on two independent seeded sample sets:
///   U_{i,m} = 1/(N-1) sum_j q(xi_j) * q(xi'_j with coordinate i from xi_j)
///   S_{i,m} = (U_{i,m} - E(q_m)^2) / V(q_m).
/// Small negative estimates are reported as-is. QoIs with zero variance get
/// S = 0 and the degenerate flag. Throws ContractError for n < 2.
SobolResult sobol_indices(const SeparatedRepresentation& model, Eigen::Index n,
                          std::uint64_t seed_a, std::uint64_t seed_b, int workers = 1);

/// Same estimator on caller-provided sample matrices (each n x d).
SobolResult sobol_indices_from_samples(const SeparatedRepresentation& model,
                                       const Eigen::MatrixXd& base,
                                       const Eigen::MatrixXd& alt, int workers = 1);

/// CSV with `#`-prefixed metadata lines, rows = inputs, columns = QoIs.
std::string sobol_to_csv(const SobolResult& result);

/// |u_i^l| tabulated on a uniform grid over [-4, 4] for qualitative
/// factor-variability reports.
struct FactorVariability {
  Eigen::VectorXd grid;
  // values[l](i, g) = |u_i^(l+1)(grid[g])|
  std::vector<Eigen::MatrixXd> values;
};

FactorVariability factor_variability_table(const SeparatedRepresentation& model,
                                           int grid_points = 81);

std::string factor_variability_to_csv(const FactorVariability& table);

}  // namespace sruq
