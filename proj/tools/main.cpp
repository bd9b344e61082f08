#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sruq/astro/elements.hpp"
#include "sruq/astro/propagate.hpp"
#include "sruq/csv.hpp"
#include "sruq/errors.hpp"
#include "sruq/parallel.hpp"
#include "sruq/pipeline/pipeline.hpp"
#include "sruq/sobol.hpp"
#include "sruq/statistics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

int classify(const std::exception& err) {
  if (dynamic_cast<const sruq::ParseError*>(&err) != nullptr ||
      dynamic_cast<const sruq::ContractError*>(&err) != nullptr)
    return kExitConfig;
  return kExitNumerical;
}

std::vector<Eigen::Index> parse_n_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  for (const auto& field : sruq::split_csv_line(text))
    out.push_back(static_cast<Eigen::Index>(sruq::parse_double(field, "--n-list")));
  if (out.empty()) throw sruq::ContractError("--n-list: empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank separated-representation surrogates for orbit uncertainty"};
  app.require_subcommand(1);

  int workers = sruq::default_workers();
  app.add_option("--workers", workers, "Worker threads for sample propagation and MC");

  // fit: full pipeline from a scenario config
  auto* fit_cmd = app.add_subcommand("fit", "Run the full pipeline from a config file");
  std::string fit_config, fit_out, fit_oracle;
  bool fit_assert = false;
  fit_cmd->add_option("config", fit_config, "Scenario config file")->required();
  fit_cmd->add_option("--out", fit_out, "Override the output directory");
  fit_cmd->add_option("--oracle", fit_oracle, "Replace propagation with a test map (poly, expsep)");
  fit_cmd->add_flag("--assert", fit_assert, "Exit 4 when validation ratio exceeds the gate");

  // validate: holdout residuals for a saved model
  auto* val_cmd = app.add_subcommand("validate", "Residual RMS of a model on a holdout CSV");
  std::string val_model, val_data, val_out;
  val_cmd->add_option("--model", val_model, "Model JSON")->required();
  val_cmd->add_option("--data", val_data, "Holdout CSV")->required();
  val_cmd->add_option("--out", val_out, "Output CSV (default stdout)");

  // stats: analytic moments (and optional sampled histograms)
  auto* stats_cmd = app.add_subcommand("stats", "Analytic moments of a saved model");
  std::string stats_model, stats_outdir;
  Eigen::Index stats_mc = 0;
  std::uint64_t stats_seed = 1;
  stats_cmd->add_option("--model", stats_model, "Model JSON")->required();
  stats_cmd->add_option("--mc", stats_mc, "Also draw N surrogate samples for histograms");
  stats_cmd->add_option("--seed", stats_seed, "Sampling seed");
  stats_cmd->add_option("--out-dir", stats_outdir, "Directory for CSV output (default stdout)");

  // sobol: first-order indices of a saved model
  auto* sobol_cmd = app.add_subcommand("sobol", "First-order Sobol indices of a saved model");
  std::string sobol_model, sobol_out;
  Eigen::Index sobol_n = 1000000;
  std::uint64_t sobol_sa = 11, sobol_sb = 22;
  sobol_cmd->add_option("--model", sobol_model, "Model JSON")->required();
  sobol_cmd->add_option("--n", sobol_n, "Samples per set");
  sobol_cmd->add_option("--seed-a", sobol_sa, "First sample-set seed");
  sobol_cmd->add_option("--seed-b", sobol_sb, "Second sample-set seed");
  sobol_cmd->add_option("--out", sobol_out, "Output CSV (default stdout)");

  // study: STD convergence boxes vs sample count
  auto* study_cmd = app.add_subcommand("study", "STD convergence study on an oracle target");
  std::string study_config, study_oracle = "expsep", study_out, study_nlist = "100,200,400";
  int study_repeats = 30, study_qoi = 0;
  study_cmd->add_option("config", study_config, "Scenario config file")->required();
  study_cmd->add_option("--oracle", study_oracle, "Oracle target (poly, expsep)");
  study_cmd->add_option("--n-list", study_nlist, "Comma-separated training sizes");
  study_cmd->add_option("--repeats", study_repeats, "Independent fits per size");
  study_cmd->add_option("--qoi", study_qoi, "QoI index (0-based)");
  study_cmd->add_option("--out", study_out, "Output CSV (default stdout)");

  // propagate: single trajectory endpoint
  auto* prop_cmd = app.add_subcommand("propagate", "Propagate the configured mean state");
  std::string prop_config;
  double prop_hours = -1.0;
  prop_cmd->add_option("config", prop_config, "Scenario config file")->required();
  prop_cmd->add_option("--hours", prop_hours, "Override the propagation span");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) {
      sruq::pipeline::ScenarioConfig config = sruq::pipeline::load_config(fit_config);
      if (!fit_out.empty()) config.output_directory = fit_out;
      const auto result = sruq::pipeline::run_pipeline(config, fit_oracle, workers);
      if (!result.ok) {
        std::cerr << "pipeline failed at stage '" << result.failed_stage
                  << "': " << result.error << "\n";
        return result.failed_stage == "generate" ? kExitConfig : kExitNumerical;
      }
      std::cout << "run complete: gamma=" << result.final_gamma
                << " worst_validation_ratio=" << result.worst_validation_ratio << "\n";
      std::cout << "artifacts in " << config.output_directory << "\n";
      if (fit_assert && result.worst_validation_ratio > config.validation_ratio_max) {
        std::cerr << "validation ratio " << result.worst_validation_ratio
                  << " exceeds gate " << config.validation_ratio_max << "\n";
        return kExitValidation;
      }
      return kExitOk;
    }

    if (*val_cmd) {
      const auto model = sruq::load_model(val_model);
      const auto holdout = sruq::load_training_csv(val_data);
      const auto v = sruq::validation_rms(model, holdout);
      std::string csv = "qoi,residual_rms,sample_rms,ratio\n";
      for (Eigen::Index j = 0; j < v.residual_rms.size(); ++j) {
        const double ratio = v.sample_rms(j) > 0.0 ? v.residual_rms(j) / v.sample_rms(j)
                                                   : std::numeric_limits<double>::quiet_NaN();
        csv += "q_" + std::to_string(j + 1) + "," + sruq::format_double(v.residual_rms(j)) +
               "," + sruq::format_double(v.sample_rms(j)) + "," +
               sruq::format_double(ratio) + "\n";
      }
      if (val_out.empty())
        std::cout << csv;
      else
        sruq::write_text_file(val_out, csv);
      return kExitOk;
    }

    if (*stats_cmd) {
      const auto model = sruq::load_model(stats_model);
      const auto moments = sruq::analytic_moments(model);
      std::string csv = "qoi,mean,std\n";
      for (Eigen::Index j = 0; j < moments.mean.size(); ++j)
        csv += "q_" + std::to_string(j + 1) + "," + sruq::format_double(moments.mean(j)) +
               "," +
               sruq::format_double(std::sqrt(std::max(0.0, moments.covariance(j, j)))) +
               "\n";
      if (stats_outdir.empty()) {
        std::cout << csv;
      } else {
        std::filesystem::create_directories(stats_outdir);
        sruq::write_text_file(stats_outdir + "/moments.csv", csv);
      }
      if (stats_mc > 0) {
        const Eigen::MatrixXd mc =
            sruq::sample_surrogate(model, stats_mc, stats_seed, workers);
        for (Eigen::Index j = 0; j < mc.cols(); ++j) {
          const auto h = sruq::histogram(mc.col(j), sruq::default_bin_count(mc.col(j)));
          std::string hist = "bin_left,bin_right,count\n";
          for (Eigen::Index b = 0; b < h.counts.size(); ++b)
            hist += sruq::format_double(h.bin_edges(b)) + "," +
                    sruq::format_double(h.bin_edges(b + 1)) + "," +
                    std::to_string(h.counts(b)) + "\n";
          const std::string name = "histogram_q" + std::to_string(j + 1) + ".csv";
          if (stats_outdir.empty())
            std::cout << "# " << name << "\n" << hist;
          else
            sruq::write_text_file(stats_outdir + "/" + name, hist);
        }
      }
      return kExitOk;
    }

    if (*sobol_cmd) {
      const auto model = sruq::load_model(sobol_model);
      const auto result = sruq::sobol_indices(model, sobol_n, sobol_sa, sobol_sb, workers);
      const std::string csv = sruq::sobol_to_csv(result);
      if (sobol_out.empty())
        std::cout << csv;
      else
        sruq::write_text_file(sobol_out, csv);
      return kExitOk;
    }

    if (*study_cmd) {
      const auto config = sruq::pipeline::load_config(study_config);
      const auto study = sruq::pipeline::convergence_study(
          config, study_oracle, parse_n_list(study_nlist), study_repeats, study_qoi,
          10000000, workers);
      const std::string csv = sruq::pipeline::convergence_study_to_csv(study);
      if (study_out.empty())
        std::cout << csv;
      else
        sruq::write_text_file(study_out, csv);
      return kExitOk;
    }

    if (*prop_cmd) {
      auto config = sruq::pipeline::load_config(prop_config);
      if (prop_hours >= 0.0) config.span_hours = prop_hours;
      const auto units = config.force_model.units();
      Eigen::VectorXd mean = config.mean_state;
      sruq::astro::CartesianState start;
      if (config.coordinate_system == sruq::pipeline::CoordinateSystem::cartesian) {
        for (int i = 0; i < 3; ++i) {
          start.position(i) = units.km_to_du(mean(i));
          start.velocity(i) = units.km_s_to_du_tu(mean(3 + i) / 1000.0);
        }
      } else {
        sruq::astro::EquinoctialState eq;
        eq.a = units.km_to_du(mean(0));
        eq.h_e = mean(1);
        eq.k_e = mean(2);
        eq.p_e = mean(3);
        eq.q_e = mean(4);
        eq.lambda_M = sruq::astro::wrap_to_pi(mean(5));
        eq.f_r = config.retrograde_factor;
        start = sruq::astro::equinoctial_to_cartesian(eq);
      }
      const double t_final = units.hours_to_tu(config.span_hours);
      sruq::astro::PropagationStats stats;
      const auto end = sruq::astro::propagate(start, config.force_model, t_final,
                                              config.integrator_tol, &stats);
      std::cout << "t_final_tu," << sruq::format_double(t_final) << "\n";
      std::cout << "position_du," << sruq::format_double(end.position.x()) << ","
                << sruq::format_double(end.position.y()) << ","
                << sruq::format_double(end.position.z()) << "\n";
      std::cout << "velocity_du_tu," << sruq::format_double(end.velocity.x()) << ","
                << sruq::format_double(end.velocity.y()) << ","
                << sruq::format_double(end.velocity.z()) << "\n";
      std::cout << "steps_accepted," << stats.steps_accepted << "\n";
      std::cout << "steps_rejected," << stats.steps_rejected << "\n";
      return kExitOk;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return classify(err);
  }
  return kExitOk;
}
