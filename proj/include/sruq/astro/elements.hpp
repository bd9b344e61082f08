#pragma once

#include "sruq/astro/state.hpp"

namespace sruq::astro {

/// Direct application of the equinoctial definitions. Requires e < 1 and,
/// for f_r = +1, inclination away from pi (throws SingularityError within
/// 1e-9 of pi, advising f_r = -1).
EquinoctialState keplerian_to_equinoctial(const KeplerianElements& kep, int f_r = +1);

/// Inverse mapping. Branches: raan = atan2(p_e, q_e) (0 when both vanish),
/// argp + f_r raan = atan2(h_e, k_e) (0 at zero eccentricity); angles are
/// wrapped to (-pi, pi].
KeplerianElements equinoctial_to_keplerian(const EquinoctialState& eq);

/// Keplerian -> Cartesian via perifocal frame; Kepler's equation solved by
/// Newton iteration to 1e-13 rad (at most 50 iterations).
CartesianState keplerian_to_cartesian(const KeplerianElements& kep, double mu = 1.0);

/// Cartesian -> Keplerian (elliptic orbits); degenerate angles fall back to
/// zero consistently with the forward conventions.
KeplerianElements cartesian_to_keplerian(const CartesianState& state, double mu = 1.0);

/// Composition eq -> kep -> cart and its inverse.
CartesianState equinoctial_to_cartesian(const EquinoctialState& eq, double mu = 1.0);
EquinoctialState cartesian_to_equinoctial(const CartesianState& state, double mu = 1.0,
                                          int f_r = +1);

/// Retrograde-factor selection rule: -1 when inclination exceeds 175 deg.
int select_retrograde_factor(double inclination);

}  // namespace sruq::astro
