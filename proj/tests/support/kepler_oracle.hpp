#pragma once

// Closed-form two-body propagation through the universal-variable Kepler
// equation with Stumpff functions. Independent of the numerical integrator.

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace oracle {

inline void stumpff(double z, double& c2, double& c3) {
  if (z > 1e-8) {
    const double s = std::sqrt(z);
    c2 = (1.0 - std::cos(s)) / z;
    c3 = (s - std::sin(s)) / (s * z);
  } else if (z < -1e-8) {
    const double s = std::sqrt(-z);
    c2 = (1.0 - std::cosh(s)) / z;
    c3 = (std::sinh(s) - s) / ((-z) * s);
  } else {
    c2 = 0.5 - z / 24.0;
    c3 = 1.0 / 6.0 - z / 120.0;
  }
}

// Vallado-style universal Kepler solve; mu in canonical units.
inline void kepler_universal(const Eigen::Vector3d& r0, const Eigen::Vector3d& v0,
                             double dt, double mu, Eigen::Vector3d& r, Eigen::Vector3d& v) {
  const double r0n = r0.norm();
  const double v0n = v0.norm();
  const double sqrt_mu = std::sqrt(mu);
  const double rdotv = r0.dot(v0);
  const double alpha = -v0n * v0n / mu + 2.0 / r0n;  // 1/a

  double chi;
  if (alpha > 1e-6) {
    chi = sqrt_mu * dt * alpha;  // elliptic initial guess
  } else if (std::abs(alpha) <= 1e-6) {
    const Eigen::Vector3d h = r0.cross(v0);
    const double p = h.squaredNorm() / mu;
    const double s = 0.5 / std::tan(2.0 * std::atan(3.0 * std::sqrt(mu / (p * p * p)) * dt));
    const double w = std::atan(std::cbrt(std::tan(s)));
    chi = std::sqrt(p) * 2.0 / std::tan(2.0 * w);
  } else {
    const double a = 1.0 / alpha;
    chi = (dt >= 0 ? 1.0 : -1.0) * std::sqrt(-a) *
          std::log(-2.0 * mu * alpha * dt /
                   (rdotv + (dt >= 0 ? 1.0 : -1.0) * std::sqrt(-mu * a) *
                                (1.0 - r0n * alpha)));
  }

  double c2 = 0.0, c3 = 0.0, rn = r0n, psi = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    psi = chi * chi * alpha;
    stumpff(psi, c2, c3);
    rn = chi * chi * c2 + rdotv / sqrt_mu * chi * (1.0 - psi * c3) +
         r0n * (1.0 - psi * c2);
    const double tofc = chi * chi * chi * c3 + rdotv / sqrt_mu * chi * chi * c2 +
                        r0n * chi * (1.0 - psi * c3);
    const double dchi = (sqrt_mu * dt - tofc) / rn;
    chi += dchi;
    if (std::abs(dchi) < 1e-14 * std::max(1.0, std::abs(chi))) break;
    if (iter == 199) throw std::runtime_error("kepler_universal: no convergence");
  }

  const double f = 1.0 - chi * chi * c2 / r0n;
  const double g = dt - chi * chi * chi * c3 / sqrt_mu;
  const double gdot = 1.0 - chi * chi * c2 / rn;
  const double fdot = sqrt_mu * chi * (psi * c3 - 1.0) / (r0n * rn);
  r = f * r0 + g * v0;
  v = fdot * r0 + gdot * v0;
}

}  // namespace oracle
