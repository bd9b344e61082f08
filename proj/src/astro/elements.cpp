#include "sruq/astro/elements.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "sruq/errors.hpp"

namespace sruq::astro {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double solve_kepler(double mean_anomaly, double e) {
  // Newton iteration on E - e sin E = M.
  const double m = wrap_to_pi(mean_anomaly);
  double ecc_anomaly = (e < 0.8) ? m : kPi * (m >= 0 ? 1.0 : -1.0);
  if (ecc_anomaly == 0.0 && e >= 0.8) ecc_anomaly = kPi;
  for (int iter = 0; iter < 50; ++iter) {
    const double f = ecc_anomaly - e * std::sin(ecc_anomaly) - m;
    const double fp = 1.0 - e * std::cos(ecc_anomaly);
    const double step = f / fp;
    ecc_anomaly -= step;
    if (std::abs(step) < 1e-13) return ecc_anomaly;
  }
  throw NumericalError("solve_kepler: Newton iteration did not converge");
}
}  // namespace

double wrap_to_pi(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

int select_retrograde_factor(double inclination) {
  return inclination > 175.0 * kPi / 180.0 ? -1 : +1;
}

EquinoctialState keplerian_to_equinoctial(const KeplerianElements& kep, int f_r) {
  if (f_r != +1 && f_r != -1)
    throw ContractError("keplerian_to_equinoctial: f_r must be +1 or -1");
  if (!(kep.e < 1.0)) throw ContractError("keplerian_to_equinoctial: requires e < 1");
  // Denominator 1 + f_r cos(i): tan(i/2) on the direct branch, cot(i/2) on
  // the retrograde branch, so only the opposite branch's limit is singular.
  const double denom = 1.0 + f_r * std::cos(kep.i);
  if (f_r == +1 && std::abs(kep.i - kPi) < 1e-9)
    throw SingularityError(
        "keplerian_to_equinoctial: inclination at pi is singular with f_r=+1; use f_r=-1");
  if (f_r == -1 && std::abs(kep.i) < 1e-9)
    throw SingularityError(
        "keplerian_to_equinoctial: inclination at 0 is singular with f_r=-1; use f_r=+1");
  EquinoctialState eq;
  eq.a = kep.a;
  eq.f_r = f_r;
  const double zeta = kep.argp + f_r * kep.raan;
  eq.h_e = kep.e * std::sin(zeta);
  eq.k_e = kep.e * std::cos(zeta);
  eq.p_e = std::sin(kep.i) * std::sin(kep.raan) / denom;
  eq.q_e = std::sin(kep.i) * std::cos(kep.raan) / denom;
  eq.lambda_M = wrap_to_pi(kep.mean_anomaly + zeta);
  return eq;
}

KeplerianElements equinoctialToKeplerianImpl(const EquinoctialState& eq) {
  KeplerianElements kep;
  kep.a = eq.a;
  kep.e = std::hypot(eq.h_e, eq.k_e);
  const double tan_half = std::hypot(eq.p_e, eq.q_e);
  if (eq.f_r == +1) {
    kep.i = 2.0 * std::atan(tan_half);
  } else {
    // tan^{-1}(i/2) branch: stored magnitude is cot(i/2).
    kep.i = tan_half > 0.0 ? 2.0 * std::atan(1.0 / tan_half) : kPi;
  }
  kep.raan = (tan_half > 0.0) ? std::atan2(eq.p_e, eq.q_e) : 0.0;
  const double zeta = (kep.e > 0.0) ? std::atan2(eq.h_e, eq.k_e) : 0.0;
  kep.argp = wrap_to_pi(zeta - eq.f_r * kep.raan);
  kep.mean_anomaly = wrap_to_pi(eq.lambda_M - zeta);
  return kep;
}

KeplerianElements equinoctial_to_keplerian(const EquinoctialState& eq) {
  if (eq.f_r != +1 && eq.f_r != -1)
    throw ContractError("equinoctial_to_keplerian: f_r must be +1 or -1");
  if (!(eq.a > 0.0)) throw ContractError("equinoctial_to_keplerian: requires a > 0");
  if (!(eq.h_e * eq.h_e + eq.k_e * eq.k_e < 1.0))
    throw ContractError("equinoctial_to_keplerian: requires h^2 + k^2 < 1");
  return equinoctialToKeplerianImpl(eq);
}

CartesianState keplerian_to_cartesian(const KeplerianElements& kep, double mu) {
  if (!(kep.a > 0.0) || !(kep.e < 1.0))
    throw ContractError("keplerian_to_cartesian: requires a > 0 and e < 1");
  const double ecc_anomaly = solve_kepler(kep.mean_anomaly, kep.e);
  const double cos_e = std::cos(ecc_anomaly);
  const double sin_e = std::sin(ecc_anomaly);
  const double r = kep.a * (1.0 - kep.e * cos_e);

  // Perifocal position/velocity.
  const double b_over_a = std::sqrt(1.0 - kep.e * kep.e);
  const Eigen::Vector3d r_pf(kep.a * (cos_e - kep.e), kep.a * b_over_a * sin_e, 0.0);
  const double n = std::sqrt(mu / (kep.a * kep.a * kep.a));
  const double rdot_scale = n * kep.a * kep.a / r;
  const Eigen::Vector3d v_pf(-rdot_scale * sin_e, rdot_scale * b_over_a * cos_e, 0.0);

  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(kep.raan, Eigen::Vector3d::UnitZ()) *
       Eigen::AngleAxisd(kep.i, Eigen::Vector3d::UnitX()) *
       Eigen::AngleAxisd(kep.argp, Eigen::Vector3d::UnitZ()))
          .toRotationMatrix();
  CartesianState state;
  state.position = rot * r_pf;
  state.velocity = rot * v_pf;
  return state;
}

KeplerianElements cartesian_to_keplerian(const CartesianState& state, double mu) {
  const Eigen::Vector3d& r = state.position;
  const Eigen::Vector3d& v = state.velocity;
  const double rn = r.norm();
  if (!(rn > 0.0)) throw ContractError("cartesian_to_keplerian: zero radius");

  const Eigen::Vector3d h = r.cross(v);
  const double hn = h.norm();
  if (hn == 0.0) throw NumericalError("cartesian_to_keplerian: rectilinear orbit");
  const Eigen::Vector3d node(-h.y(), h.x(), 0.0);
  const double nn = node.norm();

  const Eigen::Vector3d e_vec = ((v.squaredNorm() - mu / rn) * r - r.dot(v) * v) / mu;
  const double e = e_vec.norm();
  const double energy = 0.5 * v.squaredNorm() - mu / rn;
  if (!(energy < 0.0)) throw NumericalError("cartesian_to_keplerian: orbit not elliptic");

  KeplerianElements kep;
  kep.a = -mu / (2.0 * energy);
  kep.e = e;
  kep.i = std::acos(std::clamp(h.z() / hn, -1.0, 1.0));

  if (nn > 0.0) {
    kep.raan = std::atan2(node.y(), node.x());
  } else {
    kep.raan = 0.0;  // equatorial: node undefined
  }

  double true_anomaly;
  if (e > 1e-14) {
    if (nn > 0.0) {
      const Eigen::Vector3d n_hat = node / nn;
      const Eigen::Vector3d m_hat = h.cross(node).normalized();
      kep.argp = std::atan2(e_vec.dot(m_hat), e_vec.dot(n_hat));
    } else {
      kep.argp = std::atan2(e_vec.y(), e_vec.x());  // equatorial convention
      if (h.z() < 0.0) kep.argp = -kep.argp;
    }
    const Eigen::Vector3d e_hat = e_vec / e;
    const Eigen::Vector3d perp = h.cross(e_vec).normalized();
    true_anomaly = std::atan2(r.dot(perp), r.dot(e_hat));
  } else {
    kep.argp = 0.0;
    // Circular: measure from the node line (or x axis when equatorial).
    const Eigen::Vector3d ref =
        nn > 0.0 ? Eigen::Vector3d(node / nn) : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d perp = h.cross(ref).normalized();
    true_anomaly = std::atan2(r.dot(perp), r.dot(ref));
  }

  const double ecc_anomaly =
      std::atan2(std::sqrt(1.0 - e * e) * std::sin(true_anomaly),
                 e + std::cos(true_anomaly));
  kep.mean_anomaly = wrap_to_pi(ecc_anomaly - e * std::sin(ecc_anomaly));
  kep.argp = wrap_to_pi(kep.argp);
  kep.raan = wrap_to_pi(kep.raan);
  return kep;
}

CartesianState equinoctial_to_cartesian(const EquinoctialState& eq, double mu) {
  CartesianState state = keplerian_to_cartesian(equinoctial_to_keplerian(eq), mu);
  return state;
}

EquinoctialState cartesian_to_equinoctial(const CartesianState& state, double mu, int f_r) {
  return keplerian_to_equinoctial(cartesian_to_keplerian(state, mu), f_r);
}

}  // namespace sruq::astro
