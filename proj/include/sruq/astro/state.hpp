#pragma once

#include <Eigen/Core>

namespace sruq::astro {

/// Inertial position/velocity in canonical units.
struct CartesianState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // DU
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // DU/TU
  double epoch = 0.0;                                  // TU

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> y;
    y << position, velocity;
    return y;
  }
  static CartesianState from_vector(const Eigen::Matrix<double, 6, 1>& y, double epoch) {
    return CartesianState{y.head<3>(), y.tail<3>(), epoch};
  }
};

/// Classical Keplerian elements (angles in radians).
struct KeplerianElements {
  double a = 1.0;      // semimajor axis, DU
  double e = 0.0;      // eccentricity, < 1
  double i = 0.0;      // inclination
  double raan = 0.0;   // right ascension of ascending node
  double argp = 0.0;   // argument of perigee
  double mean_anomaly = 0.0;
};

/// Nonsingular equinoctial elements with retrograde factor f_r:
///   h_e = e sin(argp + f_r raan)
///   k_e = e cos(argp + f_r raan)
///   p_e = sin(i) sin(raan) / (1 + f_r cos(i))
///   q_e = sin(i) cos(raan) / (1 + f_r cos(i))
///   lambda_M = M + argp + f_r raan, wrapped to (-pi, pi].
/// f_r = +1 for direct orbits (singular at i = pi), -1 for nearly
/// retrograde orbits (singular at i = 0).
struct EquinoctialState {
  double a = 1.0;        // DU
  double h_e = 0.0;
  double k_e = 0.0;
  double p_e = 0.0;
  double q_e = 0.0;
  double lambda_M = 0.0;  // rad, (-pi, pi]
  int f_r = +1;

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> y;
    y << a, h_e, k_e, p_e, q_e, lambda_M;
    return y;
  }
};

/// Wraps an angle to (-pi, pi].
double wrap_to_pi(double angle);

}  // namespace sruq::astro
