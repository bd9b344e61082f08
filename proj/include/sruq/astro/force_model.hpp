#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sruq/astro/state.hpp"
#include "sruq/astro/units.hpp"

namespace sruq::astro {

constexpr int kMaxHarmonicDegree = 4;

/// Fully normalized Stokes coefficients up to degree/order 4 with their
/// standard deviations. Entries not listed in the embedded table are zero.
struct StokesTable {
  std::array<std::array<double, kMaxHarmonicDegree + 1>, kMaxHarmonicDegree + 1> c{};
  std::array<std::array<double, kMaxHarmonicDegree + 1>, kMaxHarmonicDegree + 1> s{};
  std::array<std::array<double, kMaxHarmonicDegree + 1>, kMaxHarmonicDegree + 1> sigma_c{};
  std::array<std::array<double, kMaxHarmonicDegree + 1>, kMaxHarmonicDegree + 1> sigma_s{};

  static StokesTable builtin();
  /// CSV `n,m,C,S,sigma_C,sigma_S`; unlisted entries stay zero.
  static StokesTable from_csv(const std::string& path);
};

/// Piecewise-exponential atmosphere: within each altitude band,
/// rho(h) = rho0 * exp(-(h - h0) / H).
struct AtmosphereBand {
  double h_min_km = 0.0;
  double h_max_km = 0.0;
  double rho0_kg_m3 = 0.0;
  double h0_km = 0.0;
  double scale_height_km = 1.0;
};

struct Atmosphere {
  std::vector<AtmosphereBand> bands;

  double density_kg_m3(double altitude_km) const;

  static Atmosphere builtin();
  /// CSV `h_min_km,h_max_km,rho0_kg_m3,h0_km,H_km`.
  static Atmosphere from_csv(const std::string& path);
  /// Single band covering all altitudes; used in tests.
  static Atmosphere single_band(double rho0_kg_m3, double h0_km, double scale_height_km);
};

struct ForceModelConfig {
  double mu = 3.986e5;  // km^3/s^2; the canonical-unit reference
  int harmonic_degree = 0;  // 0 = point mass only, up to 4
  StokesTable stokes = StokesTable::builtin();
  bool drag_enabled = false;
  double drag_coefficient = 2.0;
  double area_to_mass_m2_kg = 0.01;
  Atmosphere atmosphere = Atmosphere::builtin();
  double earth_rotation_rate_rad_s = 7.2921159e-5;
  /// Scaling of the point-mass term relative to the canonical mu; lets a
  /// sampled gravitational parameter enter without changing the unit system.
  double mu_scale = 1.0;

  CanonicalUnits units() const { return CanonicalUnits{6371.0, mu}; }
  void validate() const;
};

/// Total acceleration in DU/TU^2: point mass, spherical-harmonic
/// perturbations up to harmonic_degree (the field rotates with the Earth at
/// the constant rotation rate, zero angle at epoch 0), and cannonball drag
/// against the rotating atmosphere when enabled.
Eigen::Vector3d acceleration(const CartesianState& state, const ForceModelConfig& forces);

}  // namespace sruq::astro
