#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sruq/als.hpp"
#include "sruq/astro/force_model.hpp"

namespace sruq::pipeline {

enum class CoordinateSystem { cartesian, equinoctial };

/// One additional random input beyond the state: a force-model parameter
/// sampled as mean + std * xi. Recognized names: "mu", "C_D", "A_m", and
/// Stokes entries "C<n>,<m>" / "S<n>,<m>".
struct ExtraParam {
  std::string name;
  double mean = 0.0;
  double std_dev = 0.0;
};

/// Everything a pipeline run needs, parsed from a sectioned key/value file.
struct ScenarioConfig {
  CoordinateSystem coordinate_system = CoordinateSystem::cartesian;
  // Cartesian: position km, velocity m/s. Equinoctial: a km, h/k/p/q
  // dimensionless, lambda_M rad. Converted to canonical units internally.
  Eigen::VectorXd mean_state;
  Eigen::VectorXd std_state;
  std::vector<ExtraParam> extra_params;

  double span_hours = 36.0;
  double integrator_tol = 1e-12;

  astro::ForceModelConfig force_model;
  std::string atmosphere_file;  // empty = builtin table
  std::string stokes_file;      // empty = builtin table
  int retrograde_factor = +1;

  AlsConfig als;

  Eigen::Index n_train = 350;
  Eigen::Index n_validate = 70;
  Eigen::Index n_surrogate_mc = 100000;
  std::uint64_t train_seed = 1;
  std::uint64_t validate_seed = 2;
  std::uint64_t mc_seed = 3;
  std::uint64_t sobol_seed_a = 4;
  std::uint64_t sobol_seed_b = 5;
  Eigen::Index sobol_samples = 1000000;

  int histogram_bins = 0;  // 0 = Freedman-Diaconis with floor 10
  Eigen::Index ric_reference_index = 0;
  std::string output_directory = "run";
  double validation_ratio_max = 1e-2;  // gate applied in --assert mode

  int state_dim() const { return static_cast<int>(mean_state.size()); }
  int input_dim() const { return state_dim() + static_cast<int>(extra_params.size()); }

  void validate() const;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string emit_config(const ScenarioConfig& config);

bool operator==(const ExtraParam& a, const ExtraParam& b);
bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace sruq::pipeline
