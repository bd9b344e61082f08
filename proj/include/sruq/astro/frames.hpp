#pragma once

#include <Eigen/Core>

#include "sruq/astro/state.hpp"

namespace sruq::astro {

/// Rows are the radial, intrack, crosstrack unit vectors of the local
/// orbital frame at `reference`. Throws NumericalError when position and
/// velocity are parallel (frame degenerate).
Eigen::Matrix3d ric_frame(const CartesianState& reference);

/// Target-minus-reference position expressed in the reference RIC frame,
/// ordered (radial, intrack, crosstrack).
Eigen::Vector3d ric_transform(const CartesianState& reference, const CartesianState& target);

}  // namespace sruq::astro
