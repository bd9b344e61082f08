#pragma once

#include <string>

#include "sruq/astro/force_model.hpp"
#include "sruq/astro/state.hpp"
#include "sruq/errors.hpp"

namespace sruq::astro {

/// Propagation failed mid-span; carries the last accepted state.
class PropagationError : public NumericalError {
public:
  PropagationError(const std::string& what, const CartesianState& last)
      : NumericalError(what), last_state(last) {}
  CartesianState last_state;
};

struct PropagationStats {
  long steps_accepted = 0;
  long steps_rejected = 0;
  /// Sum of unscaled embedded error-estimate norms over accepted steps.
  double accumulated_error_estimate = 0.0;
};

/// Adaptive Dormand-Prince 5(4) with embedded error control on the combined
/// position/velocity state (absolute and relative tolerance both `tol`).
/// Only the endpoint is returned. Throws ContractError for tol outside
/// [1e-14, 1e-6] or t_final < epoch, PropagationError on step underflow
/// (h < 1e-14 TU) or if the radius drops below the Earth surface (1 DU).
CartesianState propagate(const CartesianState& state, const ForceModelConfig& forces,
                         double t_final, double tol, PropagationStats* stats = nullptr);

}  // namespace sruq::astro
