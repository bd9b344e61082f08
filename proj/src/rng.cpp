#include "sruq/rng.hpp"

#include <random>

#include "sruq/parallel.hpp"

namespace sruq {

namespace {
constexpr Eigen::Index kChunkRows = 65536;
}

Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed, int workers) {
  Eigen::MatrixXd out(rows, cols);
  if (rows == 0 || cols == 0) return out;
  const Eigen::Index nchunks = (rows + kChunkRows - 1) / kChunkRows;
  parallel_for(static_cast<std::size_t>(nchunks), workers,
               [&](std::size_t c0, std::size_t c1) {
                 for (std::size_t c = c0; c < c1; ++c) {
                   const Eigen::Index begin = static_cast<Eigen::Index>(c) * kChunkRows;
                   const Eigen::Index end = std::min(rows, begin + kChunkRows);
                   std::seed_seq sq{seed, static_cast<std::uint64_t>(c)};
                   std::mt19937_64 engine(sq);
                   std::normal_distribution<double> normal;
                   for (Eigen::Index r = begin; r < end; ++r)
                     for (Eigen::Index k = 0; k < cols; ++k) out(r, k) = normal(engine);
                 }
               });
  return out;
}

Eigen::VectorXd standard_normal_vector(Eigen::Index n, std::uint64_t seed_a,
                                       std::uint64_t seed_b) {
  std::seed_seq sq{seed_a, seed_b};
  std::mt19937_64 engine(sq);
  std::normal_distribution<double> normal;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = normal(engine);
  return out;
}

}  // namespace sruq
