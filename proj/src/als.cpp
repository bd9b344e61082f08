#include "sruq/als.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "sruq/errors.hpp"

namespace sruq {

namespace {

constexpr double kConditionWarnThreshold = 1e12;

struct LsSolution {
  Eigen::MatrixXd x;
  double condition_estimate = 0.0;
};

// Least squares via column-pivoted QR when lambda = 0 (a singular system is
// a hard error advising regularization); with lambda > 0 the ridge normal
// system is solved directly.
LsSolution solve_least_squares(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs,
                               double lambda, const std::string& context) {
  LsSolution sol;
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < a.cols())
      throw RankDeficiencyError(context +
                                ": singular least-squares system; set ridge_lambda > 0");
    const auto& rdiag = qr.matrixR().diagonal();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const double v = std::abs(rdiag(i));
      dmax = std::max(dmax, v);
      dmin = std::min(dmin, v);
    }
    sol.condition_estimate = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    sol.x = qr.solve(rhs);
  } else {
    Eigen::MatrixXd normal = a.transpose() * a;
    normal.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success)
      throw NumericalError(context + ": regularized normal system factorization failed");
    const Eigen::VectorXd dvec = ldlt.vectorD();
    const double dmax = dvec.maxCoeff();
    const double dmin = dvec.minCoeff();
    sol.condition_estimate = dmin > 0.0 ? std::sqrt(dmax / dmin)
                                        : std::numeric_limits<double>::infinity();
    sol.x = ldlt.solve(a.transpose() * rhs);
  }
  if (!sol.x.allFinite()) throw NumericalError(context + ": non-finite solution");
  return sol;
}

// Caches the per-direction basis rows and per-term factor values so sweeps
// and residual evaluations share work across the fit loop.
class AlsWorkspace {
public:
  AlsWorkspace(SeparatedRepresentation& model, const TrainingSet& train)
      : model_(model), train_(train), n_(train.size()) {
    const BasisSpec basis{model_.P};
    psi_.reserve(model_.d);
    for (int i = 0; i < model_.d; ++i)
      psi_.push_back(eval_basis_rows(basis, train_.inputs.col(i)));
    for (int l = 0; l < model_.rank(); ++l) append_factor_cache(l);
  }

  // Factor values of term l along direction i at every sample.
  void append_factor_cache(int l) {
    Eigen::MatrixXd vals(model_.d, n_);
    for (int i = 0; i < model_.d; ++i)
      vals.row(i) = (psi_[i] * model_.coeffs[l].row(i).transpose()).transpose();
    factor_vals_.push_back(std::move(vals));
  }

  std::vector<int> active_terms() const {
    std::vector<int> idx;
    for (int l = 0; l < model_.rank(); ++l)
      if (model_.scales(l) > 0.0) idx.push_back(l);
    return idx;
  }

  // prod_{i != skip} u_i^l at every sample; skip = -1 keeps all directions.
  Eigen::VectorXd factor_product(int l, int skip) const {
    Eigen::VectorXd prod = Eigen::VectorXd::Ones(n_);
    for (int i = 0; i < model_.d; ++i) {
      if (i == skip) continue;
      prod.array() *= factor_vals_[l].row(i).transpose().array();
    }
    return prod;
  }

  Eigen::MatrixXd predictions() const {
    Eigen::MatrixXd qhat = Eigen::MatrixXd::Zero(n_, model_.M);
    for (int l = 0; l < model_.rank(); ++l) {
      if (model_.scales(l) == 0.0) continue;
      qhat.noalias() +=
          (model_.scales(l) * factor_product(l, -1)) * model_.det_factors[l].transpose();
    }
    return qhat;
  }

  double gamma(double output_norm) const {
    return data_norm(train_.outputs - predictions()) / output_norm;
  }

  SweepResult sweep(int k0, double lambda) {
    const auto active = active_terms();
    SweepResult result;
    if (active.empty()) return result;
    const int p = model_.P;
    const int m = model_.M;
    const Eigen::Index rows = n_ * m;
    const Eigen::Index cols = static_cast<Eigen::Index>(active.size()) * p;

    Eigen::MatrixXd a(rows, cols);
    for (std::size_t t = 0; t < active.size(); ++t) {
      const int l = active[t];
      const Eigen::VectorXd prod = factor_product(l, k0);
      const Eigen::VectorXd su0 = model_.scales(l) * model_.det_factors[l];
      for (Eigen::Index j = 0; j < n_; ++j)
        a.block(j * m, static_cast<Eigen::Index>(t) * p, m, p).noalias() =
            (prod(j) * su0) * psi_[k0].row(j);
    }
    Eigen::VectorXd h(rows);
    for (Eigen::Index j = 0; j < n_; ++j)
      h.segment(j * m, m) = train_.outputs.row(j).transpose();

    std::ostringstream ctx;
    ctx << "sweep_direction k=" << (k0 + 1) << " rank=" << model_.rank();
    LsSolution sol = solve_least_squares(a, h, lambda, ctx.str());
    result.stacked = sol.x.col(0);
    result.condition_estimate = sol.condition_estimate;

    for (std::size_t t = 0; t < active.size(); ++t) {
      const int l = active[t];
      Eigen::VectorXd c = result.stacked.segment(static_cast<Eigen::Index>(t) * p, p);
      const Eigen::VectorXd vals = psi_[k0] * c;
      const double norm_d = std::sqrt(vals.squaredNorm() / static_cast<double>(n_));
      if (norm_d > 0.0) {
        model_.coeffs[l].row(k0) = (c / norm_d).transpose();
        model_.scales(l) *= norm_d;
        factor_vals_[l].row(k0) = (vals / norm_d).transpose();
      } else {
        reset_term_direction(l, k0);
      }
    }
    return result;
  }

  DetSolveResult solve_det(double lambda) {
    const auto active = active_terms();
    DetSolveResult result;
    if (active.empty()) return result;
    Eigen::MatrixXd a(n_, static_cast<Eigen::Index>(active.size()));
    for (std::size_t t = 0; t < active.size(); ++t)
      a.col(static_cast<Eigen::Index>(t)) =
          model_.scales(active[t]) * factor_product(active[t], -1);

    std::ostringstream ctx;
    ctx << "solve_det_factors rank=" << model_.rank();
    LsSolution sol = solve_least_squares(a, train_.outputs, lambda, ctx.str());
    result.solution = sol.x;
    result.condition_estimate = sol.condition_estimate;

    for (std::size_t t = 0; t < active.size(); ++t) {
      const int l = active[t];
      Eigen::VectorXd u0 = result.solution.row(static_cast<Eigen::Index>(t)).transpose();
      const double norm2 = u0.norm();
      if (norm2 > 0.0) {
        model_.det_factors[l] = u0 / norm2;
        model_.scales(l) *= norm2;
      } else {
        degenerate_reset(l);
      }
    }
    return result;
  }

private:
  // Factor collapsed to zero in the data norm: keep the representation
  // well formed with a constant basis vector and a zero scale.
  void reset_term_direction(int l, int k0) {
    model_.coeffs[l].row(k0).setZero();
    model_.coeffs[l](k0, 0) = 1.0;
    model_.scales(l) = 0.0;
    factor_vals_[l].row(k0).setOnes();
  }

  void degenerate_reset(int l) {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(model_.M);
    e1(0) = 1.0;
    model_.det_factors[l] = e1;
    model_.scales(l) = 0.0;
  }

  SeparatedRepresentation& model_;
  const TrainingSet& train_;
  Eigen::Index n_;
  std::vector<Eigen::MatrixXd> psi_;
  std::vector<Eigen::MatrixXd> factor_vals_;
};

void check_dims(const SeparatedRepresentation& model, const TrainingSet& train) {
  if (train.input_dim() != model.d || train.output_dim() != model.M)
    throw ContractError("als: model/training dimension mismatch");
}

}  // namespace

void AlsConfig::validate() const {
  if (!(epsilon > 0.0)) throw ContractError("AlsConfig: epsilon must be > 0");
  if (!(delta > 0.0)) throw ContractError("AlsConfig: delta must be > 0");
  if (max_rank < 1) throw ContractError("AlsConfig: max_rank must be >= 1");
  if (max_sweeps_per_rank < 1) throw ContractError("AlsConfig: max_sweeps_per_rank >= 1");
  if (ridge_lambda < 0.0) throw ContractError("AlsConfig: ridge_lambda must be >= 0");
  if (degree_count < 1) throw ContractError("AlsConfig: degree_count must be >= 1");
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::epsilon_met: return "epsilon_met";
    case TerminationReason::max_rank_stalled: return "max_rank_stalled";
    case TerminationReason::max_sweeps: return "max_sweeps";
  }
  return "unknown";
}

double FitReport::final_gamma() const {
  for (auto it = gamma_history.rbegin(); it != gamma_history.rend(); ++it)
    if (!it->empty()) return it->back();
  return std::numeric_limits<double>::quiet_NaN();
}

SweepResult sweep_direction(SeparatedRepresentation& model, const TrainingSet& train,
                            int k, double ridge_lambda) {
  check_dims(model, train);
  if (k < 1 || k > model.d) throw ContractError("sweep_direction: k out of range");
  AlsWorkspace ws(model, train);
  return ws.sweep(k - 1, ridge_lambda);
}

DetSolveResult solve_det_factors(SeparatedRepresentation& model, const TrainingSet& train,
                                 double ridge_lambda) {
  check_dims(model, train);
  AlsWorkspace ws(model, train);
  return ws.solve_det(ridge_lambda);
}

void init_rank_term(SeparatedRepresentation& model, const TrainingSet& train,
                    std::int64_t seed) {
  const int next_rank = model.rank();
  std::seed_seq sq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(next_rank)};
  std::mt19937_64 engine(sq);
  std::normal_distribution<double> normal;

  const BasisSpec basis{model.P};
  Eigen::MatrixXd c(model.d, model.P);
  for (int i = 0; i < model.d; ++i) {
    Eigen::VectorXd ci(model.P);
    for (int p = 0; p < model.P; ++p) ci(p) = normal(engine);
    const Eigen::MatrixXd psi = eval_basis_rows(basis, train.inputs.col(i));
    const Eigen::VectorXd vals = psi * ci;
    const double norm_d = std::sqrt(vals.squaredNorm() / static_cast<double>(train.size()));
    if (norm_d > 0.0) {
      c.row(i) = (ci / norm_d).transpose();
    } else {
      c.row(i).setZero();
      c(i, 0) = 1.0;
    }
  }
  Eigen::VectorXd u0(model.M);
  for (int m = 0; m < model.M; ++m) u0(m) = normal(engine);
  const double norm2 = u0.norm();
  if (norm2 > 0.0) {
    u0 /= norm2;
  } else {
    u0.setZero();
    u0(0) = 1.0;
  }

  model.coeffs.push_back(std::move(c));
  model.det_factors.push_back(std::move(u0));
  model.scales.conservativeResize(next_rank + 1);
  model.scales(next_rank) = 1e-3 * data_norm(train.outputs);
}

FitResult fit(const TrainingSet& train, const AlsConfig& config) {
  config.validate();
  train.validate();
  const double output_norm = data_norm(train.outputs);
  if (output_norm == 0.0)
    throw NumericalError("fit: training outputs are identically zero, gamma undefined");

  const int d = static_cast<int>(train.input_dim());
  const int m = static_cast<int>(train.output_dim());
  const Eigen::Index n = train.size();

  FitResult result;
  SeparatedRepresentation& model = result.model;
  model.d = d;
  model.M = m;
  model.P = config.degree_count;

  FitReport& report = result.report;
  bool done = false;

  while (!done) {
    init_rank_term(model, train, config.init_seed);
    const int rank = model.rank();
    if (n * m < rank) {
      std::ostringstream msg;
      msg << "fit: deterministic-factor system underdetermined (N*M=" << n * m
          << " < r=" << rank << ")";
      throw ContractError(msg.str());
    }
    const Eigen::Index recommended =
        static_cast<Eigen::Index>(rank) * (config.degree_count * d + m);
    if (n < recommended) {
      std::ostringstream msg;
      msg << "training set of " << n << " samples is below the recommended r*(P*d+M)="
          << recommended << " at rank " << rank;
      report.warnings.push_back(msg.str());
    }

    AlsWorkspace ws(model, train);
    report.gamma_history.emplace_back();
    auto& history = report.gamma_history.back();
    bool stalled = false;

    for (int sweep = 0; sweep < config.max_sweeps_per_rank && !stalled; ++sweep) {
      for (int k = 0; k < d; ++k) {
        const SweepResult sr = ws.sweep(k, config.ridge_lambda);
        if (sr.condition_estimate > kConditionWarnThreshold)
          report.condition_warnings.push_back({rank, k + 1, sr.condition_estimate});
      }
      const DetSolveResult det = ws.solve_det(config.ridge_lambda);
      if (det.condition_estimate > kConditionWarnThreshold)
        report.condition_warnings.push_back({rank, 0, det.condition_estimate});

      const double gamma = ws.gamma(output_norm);
      if (!std::isfinite(gamma)) {
        std::ostringstream msg;
        msg << "fit: non-finite residual at rank " << rank << " sweep " << sweep + 1;
        throw NumericalError(msg.str());
      }
      history.push_back(gamma);

      if (gamma <= config.epsilon) {
        report.converged = true;
        report.termination_reason = TerminationReason::epsilon_met;
        done = true;
        break;
      }
      // Stall rule: improvement over the residual from two sweeps back
      // dropped below delta.
      const std::size_t t = history.size();
      if (t >= 3 && history[t - 3] - history[t - 1] < config.delta) stalled = true;
    }

    if (!done) {
      if (rank >= config.max_rank) {
        report.termination_reason = stalled ? TerminationReason::max_rank_stalled
                                            : TerminationReason::max_sweeps;
        done = true;
      }
      // Otherwise append another term and continue; hitting the sweep cap
      // without a detected stall is treated the same as a stall.
    }
  }

  report.final_rank = model.rank();
  model.validate();
  return result;
}

std::string FitReport::to_json() const {
  std::ostringstream out;
  out << "{\n  \"final_rank\": " << final_rank << ",\n  \"converged\": "
      << (converged ? "true" : "false") << ",\n  \"termination_reason\": \""
      << sruq::to_string(termination_reason) << "\",\n  \"gamma_history\": [";
  for (std::size_t r = 0; r < gamma_history.size(); ++r) {
    out << (r ? ", [" : "[");
    for (std::size_t t = 0; t < gamma_history[r].size(); ++t) {
      if (t) out << ", ";
      out << gamma_history[r][t];
    }
    out << "]";
  }
  out << "],\n  \"condition_warnings\": [";
  for (std::size_t i = 0; i < condition_warnings.size(); ++i) {
    if (i) out << ", ";
    out << "{\"rank\": " << condition_warnings[i].rank
        << ", \"direction\": " << condition_warnings[i].direction
        << ", \"estimate\": " << condition_warnings[i].estimate << "}";
  }
  out << "],\n  \"warnings\": [";
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    if (i) out << ", ";
    out << "\"" << warnings[i] << "\"";
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace sruq
