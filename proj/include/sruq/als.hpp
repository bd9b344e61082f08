#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sruq/model.hpp"

namespace sruq {

struct AlsConfig {
  double epsilon = 1e-8;          // target relative residual
  double delta = 1e-9;            // stall tolerance on gamma improvement
  int max_rank = 5;
  int max_sweeps_per_rank = 100;
  double ridge_lambda = 0.0;      // Tikhonov parameter, 0 disables
  std::int64_t init_seed = 1;
  int degree_count = 4;           // P

  void validate() const;
};

enum class TerminationReason { epsilon_met, max_rank_stalled, max_sweeps };

std::string to_string(TerminationReason reason);

struct ConditionWarning {
  int rank = 0;
  int direction = 0;  // 1..d for factor sweeps, 0 for the deterministic solve
  double estimate = 0.0;
};

/// Fit diagnostics. gamma_history[k] holds the per-sweep residuals recorded
/// while the model had rank k+1; with ridge_lambda = 0 each of those
/// sequences is non-increasing (up to 1e-12 slack).
struct FitReport {
  int final_rank = 0;
  std::vector<std::vector<double>> gamma_history;
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::max_sweeps;
  std::vector<ConditionWarning> condition_warnings;
  std::vector<std::string> warnings;

  double final_gamma() const;
  std::string to_json() const;
};

struct FitResult {
  SeparatedRepresentation model;
  FitReport report;
};

/// Alternating least squares with greedy rank adaptation. Starts at rank 1,
/// sweeps directions 1..d then the deterministic factors, and appends a new
/// seeded term whenever the residual improvement over two sweeps drops below
/// delta while gamma > epsilon. Existing terms are kept across rank
/// increases. Terminates when gamma <= epsilon or the rank/sweep caps hit.
///
/// Throws ContractError when N*M < r (deterministic system underdetermined),
/// RankDeficiencyError for a singular system with ridge_lambda = 0, and
/// NumericalError with sweep/direction context for non-finite intermediates.
FitResult fit(const TrainingSet& train, const AlsConfig& config);

/// One direction update: solves the stacked least-squares problem for
/// {c_k^l}, writes the renormalized coefficients back into the model, and
/// rescales the term scales by the data norms of the new factors.
/// `stacked` returns the raw solution before renormalization (blocks of P
/// per active term, rank-major).
struct SweepResult {
  Eigen::VectorXd stacked;
  double condition_estimate = 0.0;
};
SweepResult sweep_direction(SeparatedRepresentation& model, const TrainingSet& train,
                            int k, double ridge_lambda);

/// Deterministic-factor update: solves the N x r system for all u_0^l rows,
/// then renormalizes each to unit 2-norm, folding the norm into the scale.
/// `solution` returns the raw r x M solution before renormalization.
struct DetSolveResult {
  Eigen::MatrixXd solution;
  double condition_estimate = 0.0;
};
DetSolveResult solve_det_factors(SeparatedRepresentation& model, const TrainingSet& train,
                                 double ridge_lambda);

/// Appends one term: direction coefficients drawn standard normal and
/// normalized to unit data norm, deterministic factor drawn normal and
/// normalized to unit 2-norm, scale set to 1e-3 times the output data norm.
/// Deterministic in (seed, current rank).
void init_rank_term(SeparatedRepresentation& model, const TrainingSet& train,
                    std::int64_t seed);

}  // namespace sruq
