#include "sruq/astro/frames.hpp"

#include "sruq/errors.hpp"

namespace sruq::astro {

Eigen::Matrix3d ric_frame(const CartesianState& reference) {
  const Eigen::Vector3d& r = reference.position;
  const Eigen::Vector3d& v = reference.velocity;
  const Eigen::Vector3d h = r.cross(v);
  if (r.norm() == 0.0 || h.norm() < 1e-300 * std::max(1.0, r.norm() * v.norm()))
    throw NumericalError("ric_frame: degenerate frame, position and velocity parallel");
  const Eigen::Vector3d radial = r.normalized();
  const Eigen::Vector3d crosstrack = h.normalized();
  const Eigen::Vector3d intrack = crosstrack.cross(radial);
  Eigen::Matrix3d frame;
  frame.row(0) = radial;
  frame.row(1) = intrack;
  frame.row(2) = crosstrack;
  return frame;
}

Eigen::Vector3d ric_transform(const CartesianState& reference, const CartesianState& target) {
  return ric_frame(reference) * (target.position - reference.position);
}

}  // namespace sruq::astro
