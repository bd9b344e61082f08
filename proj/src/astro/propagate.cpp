#include "sruq/astro/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "sruq/errors.hpp"

namespace sruq::astro {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0,
                 A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
// b - b_hat, the embedded 4th-order difference.
constexpr double E1 = B1 - 5179.0 / 57600.0;
constexpr double E3 = B3 - 7571.0 / 16695.0;
constexpr double E4 = B4 - 393.0 / 640.0;
constexpr double E5 = B5 - -92097.0 / 339200.0;
constexpr double E6 = B6 - 187.0 / 2100.0;
constexpr double E7 = -1.0 / 40.0;

constexpr double kMinStep = 1e-14;
constexpr long kMaxSteps = 50000000;

Vec6 derivative(double t, const Vec6& y, const ForceModelConfig& forces) {
  CartesianState s;
  s.position = y.head<3>();
  s.velocity = y.tail<3>();
  s.epoch = t;
  Vec6 dy;
  dy.head<3>() = s.velocity;
  dy.tail<3>() = acceleration(s, forces);
  return dy;
}

}  // namespace

CartesianState propagate(const CartesianState& state, const ForceModelConfig& forces,
                         double t_final, double tol, PropagationStats* stats) {
  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw ContractError("propagate: tol must lie in [1e-14, 1e-6]");
  if (t_final < state.epoch) throw ContractError("propagate: t_final before epoch");
  forces.validate();

  double t = state.epoch;
  Vec6 y = state.as_vector();
  PropagationStats local;

  if (t_final == t) {
    if (stats) *stats = local;
    return state;
  }

  auto current = [&](double at) {
    return CartesianState::from_vector(y, at);
  };

  Vec6 k1 = derivative(t, y, forces);
  // Starting step from the derivative scale, refined by the controller.
  double h = 0.01 * std::max(1e-8, y.norm()) / std::max(1e-8, k1.norm());
  h = std::min(h, t_final - t);

  long steps = 0;
  while (t < t_final) {
    if (++steps > kMaxSteps)
      throw PropagationError("propagate: step limit exceeded", current(t));
    if (h < kMinStep)
      throw PropagationError("propagate: step size underflow", current(t));
    h = std::min(h, t_final - t);

    const Vec6 k2 = derivative(t + h / 5.0, y + h * (A21 * k1), forces);
    const Vec6 k3 = derivative(t + 3.0 * h / 10.0, y + h * (A31 * k1 + A32 * k2), forces);
    const Vec6 k4 =
        derivative(t + 4.0 * h / 5.0, y + h * (A41 * k1 + A42 * k2 + A43 * k3), forces);
    const Vec6 k5 = derivative(
        t + 8.0 * h / 9.0, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), forces);
    const Vec6 k6 = derivative(
        t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), forces);
    const Vec6 y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    const Vec6 k7 = derivative(t + h, y_new, forces);

    const Vec6 err_vec =
        h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    double scaled = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double scale = tol + tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      const double e = err_vec(i) / scale;
      scaled += e * e;
    }
    scaled = std::sqrt(scaled / 6.0);

    if (scaled <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;  // FSAL
      ++local.steps_accepted;
      local.accumulated_error_estimate += err_vec.norm();
      if (y.head<3>().norm() < 1.0)
        throw PropagationError("propagate: radius fell below the Earth surface",
                               current(t));
    } else {
      ++local.steps_rejected;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(scaled, 1e-10), -0.2), 0.2, 5.0);
    h *= factor;
  }

  if (stats) *stats = local;
  return current(t_final);
}

}  // namespace sruq::astro
