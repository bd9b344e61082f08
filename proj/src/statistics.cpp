#include "sruq/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sruq/errors.hpp"
#include "sruq/rng.hpp"

namespace sruq {

Eigen::VectorXd analytic_mean(const SeparatedRepresentation& model) {
  model.validate();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(model.M);
  for (int l = 0; l < model.rank(); ++l) {
    double prod = 1.0;
    for (int i = 0; i < model.d; ++i) prod *= model.coeffs[l](i, 0);
    mean += model.scales(l) * prod * model.det_factors[l];
  }
  return mean;
}

Eigen::MatrixXd analytic_covariance(const SeparatedRepresentation& model) {
  model.validate();
  const int r = model.rank();
  // Second moment: cross products of terms with per-direction coefficient
  // inner products, then subtract the mean outer product.
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(model.M, model.M);
  for (int l = 0; l < r; ++l) {
    for (int lp = 0; lp < r; ++lp) {
      double prod = 1.0;
      for (int i = 0; i < model.d; ++i)
        prod *= model.coeffs[l].row(i).dot(model.coeffs[lp].row(i));
      second.noalias() += (model.scales(l) * model.scales(lp) * prod) *
                          (model.det_factors[l] * model.det_factors[lp].transpose());
    }
  }
  const Eigen::VectorXd mean = analytic_mean(model);
  Eigen::MatrixXd cov = second - mean * mean.transpose();
  // Symmetrize away roundoff.
  cov = 0.5 * (cov + cov.transpose()).eval();
  return cov;
}

MomentSummary analytic_moments(const SeparatedRepresentation& model) {
  MomentSummary s;
  s.mean = analytic_mean(model);
  s.covariance = analytic_covariance(model);
  s.source = MomentSource::analytic;
  return s;
}

Eigen::MatrixXd sample_surrogate(const SeparatedRepresentation& model, Eigen::Index n,
                                 std::uint64_t seed, int workers) {
  if (n < 1) throw ContractError("sample_surrogate: n must be >= 1");
  const Eigen::MatrixXd xi = standard_normal_matrix(n, model.d, seed, workers);
  return evaluate_many(model, xi, workers);
}

Histogram histogram(const Eigen::VectorXd& samples, int bins) {
  if (bins < 1) throw ContractError("histogram: bins must be >= 1");
  if (samples.size() < 1) throw ContractError("histogram: empty sample set");
  if (!samples.allFinite()) throw ContractError("histogram: non-finite samples");
  const double lo = samples.minCoeff();
  const double hi = samples.maxCoeff();
  Histogram h;
  if (lo == hi) {
    // Degenerate: every sample identical, one zero-width bin.
    h.bin_edges = Eigen::VectorXd::Constant(2, lo);
    h.counts = Eigen::VectorXi::Constant(1, static_cast<int>(samples.size()));
    return h;
  }
  h.bin_edges = Eigen::VectorXd::LinSpaced(bins + 1, lo, hi);
  h.counts = Eigen::VectorXi::Zero(bins);
  const double width = (hi - lo) / bins;
  for (Eigen::Index j = 0; j < samples.size(); ++j) {
    int b = static_cast<int>((samples(j) - lo) / width);
    b = std::clamp(b, 0, bins - 1);  // max lands in the last bin
    ++h.counts(b);
  }
  return h;
}

int default_bin_count(const Eigen::VectorXd& samples) {
  const Eigen::Index n = samples.size();
  if (n < 2) return 10;
  std::vector<double> sorted(samples.data(), samples.data() + n);
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto i = static_cast<Eigen::Index>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double span = sorted.back() - sorted.front();
  if (iqr <= 0.0 || span <= 0.0) return 10;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  const int bins = static_cast<int>(std::ceil(span / width));
  return std::max(bins, 10);
}

ValidationRms validation_rms(const SeparatedRepresentation& model, const TrainingSet& holdout) {
  if (holdout.size() < 1) throw ContractError("validation_rms: empty holdout set");
  if (holdout.input_dim() != model.d || holdout.output_dim() != model.M)
    throw ContractError("validation_rms: model/holdout dimension mismatch");
  const Eigen::MatrixXd qhat = evaluate_many(model, holdout.inputs);
  const double inv_n = 1.0 / static_cast<double>(holdout.size());
  ValidationRms v;
  v.residual_rms = ((holdout.outputs - qhat).colwise().squaredNorm() * inv_n)
                       .cwiseSqrt()
                       .transpose();
  v.sample_rms = (holdout.outputs.colwise().squaredNorm() * inv_n).cwiseSqrt().transpose();
  return v;
}

}  // namespace sruq
