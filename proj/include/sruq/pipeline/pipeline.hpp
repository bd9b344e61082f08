#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sruq/pipeline/config.hpp"

namespace sruq::pipeline {

/// Stage-by-stage outcome of run_pipeline. Artifacts are listed in the run
/// manifest with content hashes; on failure the manifest records the stage
/// that failed and the artifacts written so far are kept.
struct PipelineResult {
  bool ok = false;
  std::string failed_stage;
  std::string error;
  double final_gamma = 0.0;
  double worst_validation_ratio = 0.0;
  std::vector<std::string> artifacts;
};

/// generate -> propagate -> fit -> validate -> analyze -> report.
/// `oracle` non-empty replaces propagation with a built-in test map.
/// Reruns with identical config and seeds produce byte-identical artifacts.
PipelineResult run_pipeline(const ScenarioConfig& config, const std::string& oracle = "",
                            int workers = 1);

struct ConvergenceStudyRow {
  Eigen::Index n = 0;
  std::string method;  // "sr" or "mc"
  double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceStudyRow> rows;
  double reference_std = 0.0;
  double reference_standard_error = 0.0;
  std::vector<std::vector<double>> sr_errors;  // per N, per repeat
  std::vector<std::vector<double>> mc_errors;
};

/// For each N: `repeats` independent surrogate fits on fresh training draws
/// of the oracle, relative error of the analytic STD of QoI `qoi` against a
/// Monte Carlo reference computed once, plus a plain-MC baseline using the
/// same sample budgets. Emits box-plot quartile rows.
ConvergenceStudy convergence_study(const ScenarioConfig& config, const std::string& oracle,
                                   const std::vector<Eigen::Index>& n_list, int repeats,
                                   int qoi, Eigen::Index reference_samples = 10000000,
                                   int workers = 1);

std::string convergence_study_to_csv(const ConvergenceStudy& study);

}  // namespace sruq::pipeline
