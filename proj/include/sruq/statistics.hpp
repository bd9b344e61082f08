#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sruq/model.hpp"

namespace sruq {

enum class MomentSource { analytic, sampled };

struct MomentSummary {
  Eigen::VectorXd mean;        // M
  Eigen::MatrixXd covariance;  // M x M, symmetric PSD up to tolerance
  MomentSource source = MomentSource::analytic;
  std::int64_t sample_count = 0;  // meaningful when source == sampled
};

/// Closed-form mean of the surrogate: E(q_m) = sum_l s^l u0_m^l prod_i c_{i,1}^l.
/// Requires the orthonormal Hermite basis the model is built on.
Eigen::VectorXd analytic_mean(const SeparatedRepresentation& model);

/// Closed-form covariance:
///   COV_{mm'} = sum_{l,l'} s^l u0_m^l s^l' u0_m'^l'
///               prod_i (sum_p c_{i,p}^l c_{i,p}^l') - E(q_m) E(q_m').
Eigen::MatrixXd analytic_covariance(const SeparatedRepresentation& model);

MomentSummary analytic_moments(const SeparatedRepresentation& model);

/// Evaluates the model at N i.i.d. standard-normal input vectors.
/// Deterministic for a fixed seed, independent of the worker count.
Eigen::MatrixXd sample_surrogate(const SeparatedRepresentation& model, Eigen::Index n,
                                 std::uint64_t seed, int workers = 1);

struct Histogram {
  Eigen::VectorXd bin_edges;  // bins + 1 entries
  Eigen::VectorXi counts;     // sums to N
};

/// Equal-width bins spanning [min, max]; the last bin includes the maximum.
/// All-equal samples produce a single degenerate bin [v, v] holding all N.
Histogram histogram(const Eigen::VectorXd& samples, int bins);

/// Freedman-Diaconis bin count with a floor of 10.
int default_bin_count(const Eigen::VectorXd& samples);

struct ValidationRms {
  Eigen::VectorXd residual_rms;  // per QoI: sqrt(mean (q_m - q_hat_m)^2)
  Eigen::VectorXd sample_rms;    // per QoI: sqrt(mean q_m^2)
};

/// Residual and signal RMS per QoI over a holdout set. The holdout must be
/// disjoint from the data the model was fitted on; this is the caller's
/// responsibility and is not checked here.
ValidationRms validation_rms(const SeparatedRepresentation& model, const TrainingSet& holdout);

}  // namespace sruq
