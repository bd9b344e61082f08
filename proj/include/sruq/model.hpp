#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sruq/hermite.hpp"

namespace sruq {

/// Rank-r sum of products of univariate polynomial factors:
///
///   q_hat(xi) = sum_l scales[l] * det_factors[l] * prod_i u_i^l(xi_i)
///
/// with u_i^l(x) = sum_p coeffs[l](i,p) psi_p(x). Instances are treated as
/// immutable once fitting completes; evaluation is reentrant.
struct SeparatedRepresentation {
  int d = 0;  // input dimension
  int M = 0;  // output dimension
  int P = 0;  // basis functions per factor

  Eigen::VectorXd scales;                  // r, nonnegative
  std::vector<Eigen::VectorXd> det_factors;  // r vectors of length M
  std::vector<Eigen::MatrixXd> coeffs;       // r matrices, d x P

  int rank() const { return static_cast<int>(scales.size()); }
  BasisSpec basis() const { return BasisSpec{P}; }

  /// Checks shape and value invariants (r,d,M,P >= 1, scales >= 0, all
  /// entries finite, consistent dimensions). Throws ContractError.
  void validate() const;
};

/// N paired samples of inputs xi_j (N x d) and realizations q(xi_j) (N x M).
struct TrainingSet {
  Eigen::MatrixXd inputs;   // N x d
  Eigen::MatrixXd outputs;  // N x M
  std::int64_t rng_seed = 0;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index input_dim() const { return inputs.cols(); }
  Eigen::Index output_dim() const { return outputs.cols(); }

  void validate() const;
};

/// q_hat at a single input point. Throws ContractError on dimension mismatch.
Eigen::VectorXd evaluate(const SeparatedRepresentation& model, const Eigen::VectorXd& xi);

/// q_hat at many points at once; returns N x M. Row-chunk parallel when
/// workers > 1 (identical result for any worker count).
Eigen::MatrixXd evaluate_many(const SeparatedRepresentation& model,
                              const Eigen::MatrixXd& inputs, int workers = 1);

/// RMS-over-samples Euclidean norm: sqrt( (1/N) sum_j ||row_j||_2^2 ).
/// Throws ContractError for an empty matrix.
double data_norm(const Eigen::MatrixXd& residuals);

/// gamma = ||q - q_hat||_D / ||q||_D over the training set.
/// Throws NumericalError when the outputs are identically zero.
double relative_residual(const SeparatedRepresentation& model, const TrainingSet& train);

/// Model (de)serialization: versioned JSON with explicit shape fields and
/// row-major coefficient arrays. load_model validates all invariants and
/// reports malformed input as ParseError with location context.
void save_model(const SeparatedRepresentation& model, const std::string& path);
SeparatedRepresentation load_model(const std::string& path);

std::string model_to_json(const SeparatedRepresentation& model);
SeparatedRepresentation model_from_json(const std::string& text);

/// TrainingSet CSV: header `xi_1,...,xi_d,q_1,...,q_M`, one sample per line,
/// shortest round-trip decimal formatting. The rng_seed is not part of the
/// file; run manifests record seeds.
std::string training_to_csv(const TrainingSet& train);
void save_training_csv(const TrainingSet& train, const std::string& path);
TrainingSet load_training_csv(const std::string& path);

}  // namespace sruq
