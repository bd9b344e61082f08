#include "sruq/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sruq/astro/elements.hpp"
#include "sruq/astro/frames.hpp"
#include "sruq/astro/propagate.hpp"
#include "sruq/astro/sampling.hpp"
#include "sruq/csv.hpp"
#include "sruq/errors.hpp"
#include "sruq/parallel.hpp"
#include "sruq/pipeline/oracles.hpp"
#include "sruq/rng.hpp"
#include "sruq/sobol.hpp"
#include "sruq/statistics.hpp"

namespace sruq::pipeline {

namespace {

namespace fs = std::filesystem;

void apply_extra_param(astro::ForceModelConfig& fm, const std::string& name, double value,
                       double mu_reference) {
  if (name == "mu") {
    fm.mu_scale = value / mu_reference;
    return;
  }
  if (name == "C_D") {
    fm.drag_coefficient = value;
    return;
  }
  if (name == "A_m") {
    fm.area_to_mass_m2_kg = value;
    return;
  }
  if (name.size() >= 4 && (name[0] == 'C' || name[0] == 'S')) {
    const auto comma = name.find(',');
    if (comma != std::string::npos) {
      const int n = std::stoi(name.substr(1, comma - 1));
      const int m = std::stoi(name.substr(comma + 1));
      if (n >= 2 && n <= astro::kMaxHarmonicDegree && m >= 0 && m <= n) {
        if (name[0] == 'C')
          fm.stokes.c[n][m] = value;
        else
          fm.stokes.s[n][m] = value;
        return;
      }
    }
  }
  throw ContractError("unknown extra parameter '" + name +
                      "' (expected mu, C_D, A_m, C<n>,<m> or S<n>,<m>)");
}

/// Converts the configured mean/std vectors (km, m/s, rad) into canonical
/// units matching the coordinate system.
struct CanonicalScenario {
  Eigen::VectorXd mean;  // canonical units
  Eigen::VectorXd std_dev;
};

CanonicalScenario to_canonical(const ScenarioConfig& cfg) {
  const astro::CanonicalUnits units = cfg.force_model.units();
  CanonicalScenario out;
  out.mean = cfg.mean_state;
  out.std_dev = cfg.std_state;
  if (cfg.coordinate_system == CoordinateSystem::cartesian) {
    for (int i = 0; i < 3; ++i) {
      out.mean(i) = units.km_to_du(cfg.mean_state(i));
      out.std_dev(i) = units.km_to_du(cfg.std_state(i));
      // Velocities are configured in m/s.
      out.mean(3 + i) = units.km_s_to_du_tu(cfg.mean_state(3 + i) / 1000.0);
      out.std_dev(3 + i) = units.km_s_to_du_tu(cfg.std_state(3 + i) / 1000.0);
    }
  } else {
    out.mean(0) = units.km_to_du(cfg.mean_state(0));
    out.std_dev(0) = units.km_to_du(cfg.std_state(0));
  }
  return out;
}

astro::CartesianState cartesian_from_row(const Eigen::VectorXd& row) {
  astro::CartesianState s;
  s.position = row.head<3>();
  s.velocity = row.segment<3>(3);
  return s;
}

/// Black-box map xi -> final state for one sample, including any extra
/// force-model parameters carried in the trailing xi components.
class ScenarioPropagator {
public:
  ScenarioPropagator(const ScenarioConfig& cfg)
      : cfg_(cfg), canonical_(to_canonical(cfg)), t_final_(0.0) {
    const astro::CanonicalUnits units = cfg.force_model.units();
    t_final_ = units.hours_to_tu(cfg.span_hours);
    if (cfg_.coordinate_system == CoordinateSystem::equinoctial) {
      // Reference trajectory anchors the mean-longitude wrap branch.
      astro::EquinoctialState eq = equinoctial_from_row(canonical_.mean);
      const astro::CartesianState cart0 = astro::equinoctial_to_cartesian(eq);
      const astro::CartesianState cart1 =
          astro::propagate(cart0, cfg_.force_model, t_final_, cfg_.integrator_tol);
      lambda_ref_ = astro::cartesian_to_equinoctial(cart1, 1.0, cfg_.retrograde_factor)
                        .lambda_M;
    }
  }

  int output_dim() const { return 6; }

  Eigen::VectorXd propagate_sample(const Eigen::VectorXd& xi) const {
    Eigen::VectorXd state = canonical_.mean + canonical_.std_dev.cwiseProduct(xi.head(6));
    astro::ForceModelConfig fm = cfg_.force_model;
    for (std::size_t p = 0; p < cfg_.extra_params.size(); ++p) {
      const auto& param = cfg_.extra_params[p];
      const double value = param.mean + param.std_dev * xi(6 + static_cast<Eigen::Index>(p));
      apply_extra_param(fm, param.name, value, cfg_.force_model.mu);
    }

    if (cfg_.coordinate_system == CoordinateSystem::cartesian) {
      const astro::CartesianState end = astro::propagate(
          cartesian_from_row(state), fm, t_final_, cfg_.integrator_tol);
      Eigen::VectorXd out(6);
      out << end.position, end.velocity;
      return out;
    }

    const astro::EquinoctialState eq0 = equinoctial_from_row(state);
    const astro::CartesianState cart0 = astro::equinoctial_to_cartesian(eq0);
    const astro::CartesianState cart1 =
        astro::propagate(cart0, fm, t_final_, cfg_.integrator_tol);
    astro::EquinoctialState eq1 =
        astro::cartesian_to_equinoctial(cart1, 1.0, cfg_.retrograde_factor);
    // Keep the mean longitude on the branch nearest the reference trajectory.
    eq1.lambda_M = lambda_ref_ + astro::wrap_to_pi(eq1.lambda_M - lambda_ref_);
    return eq1.as_vector();
  }

  astro::EquinoctialState equinoctial_from_row(const Eigen::VectorXd& row) const {
    astro::EquinoctialState eq;
    eq.a = row(0);
    eq.h_e = row(1);
    eq.k_e = row(2);
    eq.p_e = row(3);
    eq.q_e = row(4);
    eq.lambda_M = astro::wrap_to_pi(row(5));
    eq.f_r = cfg_.retrograde_factor;
    return eq;
  }

private:
  const ScenarioConfig& cfg_;
  CanonicalScenario canonical_;
  double t_final_;
  double lambda_ref_ = 0.0;
};

Eigen::MatrixXd propagate_samples(const ScenarioPropagator& prop, const Eigen::MatrixXd& xi,
                                  int workers) {
  Eigen::MatrixXd out(xi.rows(), prop.output_dim());
  parallel_for(static_cast<std::size_t>(xi.rows()), workers,
               [&](std::size_t b, std::size_t e) {
                 for (std::size_t j = b; j < e; ++j)
                   out.row(static_cast<Eigen::Index>(j)) =
                       prop.propagate_sample(xi.row(static_cast<Eigen::Index>(j)).transpose())
                           .transpose();
               });
  return out;
}

std::string validation_csv(const ValidationRms& v) {
  std::ostringstream out;
  out << "qoi,residual_rms,sample_rms,ratio\n";
  for (Eigen::Index j = 0; j < v.residual_rms.size(); ++j) {
    const double ratio =
        v.sample_rms(j) > 0.0 ? v.residual_rms(j) / v.sample_rms(j)
                              : std::numeric_limits<double>::quiet_NaN();
    out << "q_" << (j + 1) << "," << format_double(v.residual_rms(j)) << ","
        << format_double(v.sample_rms(j)) << "," << format_double(ratio) << "\n";
  }
  return out.str();
}

std::string moments_csv(const MomentSummary& m) {
  std::ostringstream out;
  out << "qoi,mean,std\n";
  for (Eigen::Index j = 0; j < m.mean.size(); ++j)
    out << "q_" << (j + 1) << "," << format_double(m.mean(j)) << ","
        << format_double(std::sqrt(std::max(0.0, m.covariance(j, j)))) << "\n";
  return out.str();
}

std::string covariance_csv(const Eigen::MatrixXd& cov) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      if (j) out << ",";
      out << format_double(cov(i, j));
    }
    out << "\n";
  }
  return out.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin_left,bin_right,count\n";
  for (Eigen::Index b = 0; b < h.counts.size(); ++b)
    out << format_double(h.bin_edges(b)) << "," << format_double(h.bin_edges(b + 1)) << ","
        << h.counts(b) << "\n";
  return out.str();
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

PipelineResult run_pipeline(const ScenarioConfig& config, const std::string& oracle,
                            int workers) {
  PipelineResult result;
  config.validate();
  if (!oracle.empty() && !oracle_known(oracle))
    throw ContractError("unknown oracle '" + oracle + "'");

  const fs::path dir(config.output_directory);
  fs::create_directories(dir);

  nlohmann::json manifest;
  manifest["tool"] = "sruq";
  manifest["version"] = "0.1.0";
  manifest["model_format"] = "sr-model/1";
  manifest["seeds"] = {{"train", config.train_seed},
                       {"validate", config.validate_seed},
                       {"surrogate_mc", config.mc_seed},
                       {"sobol_a", config.sobol_seed_a},
                       {"sobol_b", config.sobol_seed_b},
                       {"als_init", config.als.init_seed}};
  manifest["oracle"] = oracle;
  auto artifacts = nlohmann::json::array();

  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    write_text_file(path.string(), content);
    artifacts.push_back({{"path", name},
                         {"bytes", content.size()},
                         {"fnv1a64", fnv1a_hex(content)}});
    result.artifacts.push_back(path.string());
  };
  auto finish_manifest = [&](const std::string& status, const std::string& failed_stage,
                             const std::string& error) {
    manifest["status"] = status;
    if (!failed_stage.empty()) manifest["failed_stage"] = failed_stage;
    if (!error.empty()) manifest["error"] = error;
    manifest["artifacts"] = artifacts;
    write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  };

  std::string stage = "generate";
  try {
    const int d = config.input_dim();
    TrainingSet train, holdout;
    train.rng_seed = static_cast<std::int64_t>(config.train_seed);
    holdout.rng_seed = static_cast<std::int64_t>(config.validate_seed);
    train.inputs = standard_normal_matrix(config.n_train, d, config.train_seed, workers);
    holdout.inputs =
        standard_normal_matrix(std::max<Eigen::Index>(config.n_validate, 1), d,
                               config.validate_seed, workers);

    stage = "propagate";
    if (!oracle.empty()) {
      train.outputs = oracle_eval_many(oracle, train.inputs);
      holdout.outputs = oracle_eval_many(oracle, holdout.inputs);
    } else {
      ScenarioPropagator prop(config);
      train.outputs = propagate_samples(prop, train.inputs, workers);
      holdout.outputs = propagate_samples(prop, holdout.inputs, workers);
    }
    emit("training.csv", training_to_csv(train));
    emit("holdout.csv", training_to_csv(holdout));

    stage = "fit";
    AlsConfig als = config.als;
    FitResult fitres = fit(train, als);
    result.final_gamma = fitres.report.final_gamma();
    emit("model.json", model_to_json(fitres.model));
    emit("fit_report.json", fitres.report.to_json());

    stage = "validate";
    const ValidationRms v = validation_rms(fitres.model, holdout);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < v.residual_rms.size(); ++j)
      if (v.sample_rms(j) > 0.0)
        worst = std::max(worst, v.residual_rms(j) / v.sample_rms(j));
    result.worst_validation_ratio = worst;
    emit("validation.csv", validation_csv(v));

    stage = "analyze";
    const MomentSummary moments = analytic_moments(fitres.model);
    emit("moments.csv", moments_csv(moments));
    emit("covariance.csv", covariance_csv(moments.covariance));

    const Eigen::MatrixXd mc =
        sample_surrogate(fitres.model, config.n_surrogate_mc, config.mc_seed, workers);
    for (Eigen::Index j = 0; j < mc.cols(); ++j) {
      const int bins =
          config.histogram_bins > 0 ? config.histogram_bins : default_bin_count(mc.col(j));
      std::ostringstream name;
      name << "histogram_q" << (j + 1) << ".csv";
      emit(name.str(), histogram_csv(histogram(mc.col(j), bins)));
    }

    SobolResult sobol = sobol_indices(fitres.model, config.sobol_samples,
                                      config.sobol_seed_a, config.sobol_seed_b, workers);
    emit("sobol.csv", sobol_to_csv(sobol));
    emit("factors.csv", factor_variability_to_csv(factor_variability_table(fitres.model)));

    if (oracle.empty() && config.coordinate_system == CoordinateSystem::cartesian) {
      const Eigen::Index ref_idx =
          std::clamp<Eigen::Index>(config.ric_reference_index, 0, train.size() - 1);
      const astro::CartesianState ref =
          cartesian_from_row(train.outputs.row(ref_idx).transpose());
      std::ostringstream ric;
      ric << "radial,intrack,crosstrack\n";
      for (Eigen::Index jm = 0; jm < mc.rows(); ++jm) {
        const astro::CartesianState target = cartesian_from_row(mc.row(jm).transpose());
        const Eigen::Vector3d x = astro::ric_transform(ref, target);
        ric << format_double(x(0)) << "," << format_double(x(1)) << ","
            << format_double(x(2)) << "\n";
      }
      emit("ric.csv", ric.str());
    }

    stage = "report";
    manifest["final_gamma"] = result.final_gamma;
    manifest["final_rank"] = fitres.report.final_rank;
    manifest["converged"] = fitres.report.converged;
    manifest["termination_reason"] = to_string(fitres.report.termination_reason);
    manifest["worst_validation_ratio"] = result.worst_validation_ratio;
    finish_manifest("ok", "", "");
    result.ok = true;
  } catch (const std::exception& err) {
    result.ok = false;
    result.failed_stage = stage;
    result.error = err.what();
    finish_manifest("failed", stage, err.what());
  }
  return result;
}

ConvergenceStudy convergence_study(const ScenarioConfig& config, const std::string& oracle,
                                   const std::vector<Eigen::Index>& n_list, int repeats,
                                   int qoi, Eigen::Index reference_samples, int workers) {
  if (repeats < 2) throw ContractError("convergence_study: repeats must be >= 2");
  if (!oracle_known(oracle))
    throw ContractError("convergence_study: requires a built-in oracle target");
  const int d = config.input_dim();
  const int m = oracle_output_dim(oracle);
  if (qoi < 0 || qoi >= m) throw ContractError("convergence_study: qoi out of range");

  ConvergenceStudy study;

  // Reference STD from one large MC draw on the oracle itself.
  {
    const Eigen::MatrixXd xi =
        standard_normal_matrix(reference_samples, d, config.mc_seed ^ 0x9e3779b97f4a7c15ull,
                               workers);
    const Eigen::MatrixXd q = oracle_eval_many(oracle, xi);
    const Eigen::VectorXd col = q.col(qoi);
    const double mean = col.mean();
    const Eigen::ArrayXd centered = col.array() - mean;
    const double var = centered.square().sum() / static_cast<double>(col.size() - 1);
    const double m4 = centered.pow(4).mean();
    study.reference_std = std::sqrt(var);
    // SE of the sample STD from the fourth moment.
    study.reference_standard_error =
        std::sqrt(std::max(0.0, m4 - var * var) / static_cast<double>(col.size())) /
        (2.0 * study.reference_std);
    if (!(study.reference_std > 0.0))
      throw NumericalError("convergence_study: reference STD is zero");
  }

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const Eigen::Index n = n_list[ni];
    std::vector<double> sr_err(repeats), mc_err(repeats);
    for (int rep = 0; rep < repeats; ++rep) {
      const std::uint64_t seed =
          config.train_seed + 1000003ull * static_cast<std::uint64_t>(ni) +
          131ull * static_cast<std::uint64_t>(rep) + 17ull;
      TrainingSet train;
      train.inputs = standard_normal_matrix(n, d, seed, workers);
      train.outputs = oracle_eval_many(oracle, train.inputs);
      train.rng_seed = static_cast<std::int64_t>(seed);

      AlsConfig als = config.als;
      als.init_seed = static_cast<std::int64_t>(seed ^ 0x5bf03635ull);
      const FitResult fres = fit(train, als);
      const double sr_std =
          std::sqrt(std::max(0.0, analytic_covariance(fres.model)(qoi, qoi)));
      sr_err[rep] = std::abs(sr_std - study.reference_std) / study.reference_std;

      // MC baseline: sample STD of the same N raw realizations.
      const Eigen::VectorXd col = train.outputs.col(qoi);
      const double mean = col.mean();
      const double var =
          (col.array() - mean).square().sum() / static_cast<double>(col.size() - 1);
      mc_err[rep] = std::abs(std::sqrt(var) - study.reference_std) / study.reference_std;
    }
    study.sr_errors.push_back(sr_err);
    study.mc_errors.push_back(mc_err);

    for (const auto& [method, errs] :
         {std::pair<std::string, std::vector<double>*>{"sr", &sr_err},
          std::pair<std::string, std::vector<double>*>{"mc", &mc_err}}) {
      std::vector<double> sorted = *errs;
      std::sort(sorted.begin(), sorted.end());
      ConvergenceStudyRow row;
      row.n = n;
      row.method = method;
      row.min = sorted.front();
      row.q25 = quantile_sorted(sorted, 0.25);
      row.median = quantile_sorted(sorted, 0.50);
      row.q75 = quantile_sorted(sorted, 0.75);
      row.max = sorted.back();
      study.rows.push_back(row);
    }
  }
  return study;
}

std::string convergence_study_to_csv(const ConvergenceStudy& study) {
  std::ostringstream out;
  out << "# reference_std=" << format_double(study.reference_std) << "\n";
  out << "# reference_standard_error=" << format_double(study.reference_standard_error)
      << "\n";
  out << "n,method,min,q25,median,q75,max\n";
  for (const auto& row : study.rows)
    out << row.n << "," << row.method << "," << format_double(row.min) << ","
        << format_double(row.q25) << "," << format_double(row.median) << ","
        << format_double(row.q75) << "," << format_double(row.max) << "\n";
  return out.str();
}

}  // namespace sruq::pipeline
