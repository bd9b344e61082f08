#pragma once

#include <cstdint>
#include <Eigen/Core>

namespace sruq {

/// Matrix of i.i.d. standard-normal draws, row-major fill.
///
/// Rows are generated in fixed-size chunks, each chunk with its own engine
/// seeded from (seed, chunk index), so the result is identical no matter how
/// many worker threads fill it. All stochastic sampling in the library goes
/// through this function.
Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed, int workers = 1);

/// Single-stream variant used for small draws (factor initialization).
Eigen::VectorXd standard_normal_vector(Eigen::Index n, std::uint64_t seed_a,
                                       std::uint64_t seed_b);

}  // namespace sruq
