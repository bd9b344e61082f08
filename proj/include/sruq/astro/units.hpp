#pragma once

#include <cmath>

namespace sruq::astro {

/// Canonical units: distances in Earth mean radii (DU), time in TU with
/// TU = sqrt(DU^3 / mu) so the gravitational parameter is 1 in DU^3/TU^2.
struct CanonicalUnits {
  double du_km = 6371.0;
  double mu_km3_s2 = 3.986e5;

  double tu_s() const { return std::sqrt(du_km * du_km * du_km / mu_km3_s2); }
  double vu_km_s() const { return du_km / tu_s(); }  // DU/TU in km/s

  double km_to_du(double km) const { return km / du_km; }
  double du_to_km(double du) const { return du * du_km; }
  double km_s_to_du_tu(double km_s) const { return km_s / vu_km_s(); }
  double du_tu_to_km_s(double v) const { return v * vu_km_s(); }
  double s_to_tu(double s) const { return s / tu_s(); }
  double hours_to_tu(double h) const { return s_to_tu(h * 3600.0); }
};

}  // namespace sruq::astro
