#include "sruq/astro/force_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sruq/csv.hpp"
#include "sruq/errors.hpp"

namespace sruq::astro {

StokesTable StokesTable::builtin() {
  StokesTable t;
  auto set = [&](int n, int m, double c, double s, double sc, double ss) {
    t.c[n][m] = c;
    t.s[n][m] = s;
    t.sigma_c[n][m] = sc;
    t.sigma_s[n][m] = ss;
  };
  set(2, 0, -4.8416e-04, 0.0, 6.1e-11, 0.0);
  set(2, 2, 2.4393e-06, -1.4002e-06, 3.1e-11, 3.1e-11);
  set(3, 0, 9.5721e-07, 0.0, 1.1e-11, 0.0);
  set(3, 1, 2.0304e-06, 2.4820e-07, 1.6e-11, 1.6e-11);
  set(3, 2, 9.0479e-07, -6.1898e-07, 2.2e-11, 2.2e-11);
  set(3, 3, 7.2127e-07, 1.4143e-06, 2.6e-11, 2.6e-11);
  set(4, 0, 5.3999e-07, 0.0, 8.2e-12, 0.0);
  return t;
}

StokesTable StokesTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  StokesTable t{};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected n,m,C,S,sigma_C,sigma_S");
    const std::string ctx = path + ":" + std::to_string(lineno);
    const int n = static_cast<int>(parse_double(fields[0], ctx));
    const int m = static_cast<int>(parse_double(fields[1], ctx));
    if (n < 2 || n > kMaxHarmonicDegree || m < 0 || m > n)
      throw ParseError(ctx + ": degree/order out of range (2 <= n <= 4, 0 <= m <= n)");
    t.c[n][m] = parse_double(fields[2], ctx);
    t.s[n][m] = parse_double(fields[3], ctx);
    t.sigma_c[n][m] = parse_double(fields[4], ctx);
    t.sigma_s[n][m] = parse_double(fields[5], ctx);
  }
  return t;
}

Atmosphere Atmosphere::builtin() {
  // Standard piecewise exponential density model (bands in km, kg/m^3).
  Atmosphere atm;
  const double bands[][5] = {
      {0, 25, 1.225, 0, 7.249},          {25, 30, 3.899e-2, 25, 6.349},
      {30, 40, 1.774e-2, 30, 6.682},     {40, 50, 3.972e-3, 40, 7.554},
      {50, 60, 1.057e-3, 50, 8.382},     {60, 70, 3.206e-4, 60, 7.714},
      {70, 80, 8.770e-5, 70, 6.549},     {80, 90, 1.905e-5, 80, 5.799},
      {90, 100, 3.396e-6, 90, 5.382},    {100, 110, 5.297e-7, 100, 5.877},
      {110, 120, 9.661e-8, 110, 7.263},  {120, 130, 2.438e-8, 120, 9.473},
      {130, 140, 8.484e-9, 130, 12.636}, {140, 150, 3.845e-9, 140, 16.149},
      {150, 180, 2.070e-9, 150, 22.523}, {180, 200, 5.464e-10, 180, 29.740},
      {200, 250, 2.789e-10, 200, 37.105},{250, 300, 7.248e-11, 250, 45.546},
      {300, 350, 2.418e-11, 300, 53.628},{350, 400, 9.518e-12, 350, 53.298},
      {400, 450, 3.725e-12, 400, 58.515},{450, 500, 1.585e-12, 450, 60.828},
      {500, 600, 6.967e-13, 500, 63.822},{600, 700, 1.454e-13, 600, 71.835},
      {700, 800, 3.614e-14, 700, 88.667},{800, 900, 1.170e-14, 800, 124.64},
      {900, 1000, 5.245e-15, 900, 181.05},
      {1000, 1e9, 3.019e-15, 1000, 268.00},
  };
  for (const auto& b : bands) atm.bands.push_back({b[0], b[1], b[2], b[3], b[4]});
  return atm;
}

Atmosphere Atmosphere::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  Atmosphere atm;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("h_min", 0) == 0) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected h_min_km,h_max_km,rho0_kg_m3,h0_km,H_km");
    const std::string ctx = path + ":" + std::to_string(lineno);
    AtmosphereBand band;
    band.h_min_km = parse_double(fields[0], ctx);
    band.h_max_km = parse_double(fields[1], ctx);
    band.rho0_kg_m3 = parse_double(fields[2], ctx);
    band.h0_km = parse_double(fields[3], ctx);
    band.scale_height_km = parse_double(fields[4], ctx);
    if (band.rho0_kg_m3 < 0.0 || band.scale_height_km <= 0.0)
      throw ParseError(ctx + ": density must be >= 0 and scale height > 0");
    atm.bands.push_back(band);
  }
  if (atm.bands.empty()) throw ParseError(path + ": no atmosphere bands");
  return atm;
}

Atmosphere Atmosphere::single_band(double rho0_kg_m3, double h0_km, double scale_height_km) {
  Atmosphere atm;
  atm.bands.push_back({-1e9, 1e9, rho0_kg_m3, h0_km, scale_height_km});
  return atm;
}

double Atmosphere::density_kg_m3(double altitude_km) const {
  if (bands.empty()) return 0.0;
  const AtmosphereBand* band = &bands.back();
  if (altitude_km < bands.front().h_min_km) {
    band = &bands.front();
  } else {
    for (const auto& b : bands) {
      if (altitude_km >= b.h_min_km && altitude_km < b.h_max_km) {
        band = &b;
        break;
      }
    }
  }
  return band->rho0_kg_m3 * std::exp(-(altitude_km - band->h0_km) / band->scale_height_km);
}

void ForceModelConfig::validate() const {
  if (!(mu > 0.0)) throw ContractError("ForceModelConfig: mu must be > 0");
  if (harmonic_degree < 0 || harmonic_degree > kMaxHarmonicDegree)
    throw ContractError("ForceModelConfig: harmonic_degree must be in [0, 4]");
  if (drag_enabled) {
    if (area_to_mass_m2_kg < 0.0)
      throw ContractError("ForceModelConfig: area_to_mass must be >= 0");
    for (const auto& b : atmosphere.bands)
      if (b.rho0_kg_m3 < 0.0) throw ContractError("ForceModelConfig: negative density");
  }
  if (!(mu_scale > 0.0)) throw ContractError("ForceModelConfig: mu_scale must be > 0");
}

namespace {

// Unnormalized associated Legendre values P[n][m](sin_phi) for n <= nmax,
// plus one extra order per degree for the latitude derivative.
void legendre(double sin_phi, double cos_phi, int nmax,
              double p[kMaxHarmonicDegree + 1][kMaxHarmonicDegree + 2]) {
  for (int n = 0; n <= nmax; ++n)
    for (int m = 0; m <= nmax + 1; ++m) p[n][m] = 0.0;
  p[0][0] = 1.0;
  if (nmax == 0) return;
  p[1][0] = sin_phi;
  p[1][1] = cos_phi;
  for (int n = 2; n <= nmax; ++n) {
    p[n][0] = ((2 * n - 1) * sin_phi * p[n - 1][0] - (n - 1) * p[n - 2][0]) / n;
    for (int m = 1; m < n; ++m)
      p[n][m] = p[n - 2][m] + (2 * n - 1) * cos_phi * p[n - 1][m - 1];
    p[n][n] = (2 * n - 1) * cos_phi * p[n - 1][n - 1];
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Conversion factor from fully normalized to unnormalized coefficients.
double denormalization(int n, int m) {
  const double k = (m == 0) ? 1.0 : 2.0;
  return std::sqrt(k * (2 * n + 1) * factorial(n - m) / factorial(n + m));
}

}  // namespace

Eigen::Vector3d acceleration(const CartesianState& state, const ForceModelConfig& forces) {
  const Eigen::Vector3d& r = state.position;
  const double rn = r.norm();
  if (!(rn > 0.0)) throw ContractError("acceleration: zero radius");

  const double mu_c = forces.mu_scale;  // canonical mu = 1 at the reference value
  Eigen::Vector3d acc = -mu_c / (rn * rn * rn) * r;

  const CanonicalUnits units = forces.units();

  if (forces.harmonic_degree >= 2) {
    const double rxy2 = r.x() * r.x() + r.y() * r.y();
    const double rxy = std::sqrt(rxy2);
    const double sin_phi = r.z() / rn;
    const double cos_phi = rxy / rn;
    const double tan_phi = cos_phi > 0.0 ? sin_phi / cos_phi : 0.0;

    // Body-fixed longitude: the field rotates with the Earth, zero angle at
    // epoch 0.
    const double omega_tu = forces.earth_rotation_rate_rad_s * units.tu_s();
    const double lambda = std::atan2(r.y(), r.x()) - omega_tu * state.epoch;

    double p[kMaxHarmonicDegree + 1][kMaxHarmonicDegree + 2];
    legendre(sin_phi, cos_phi, forces.harmonic_degree, p);

    double du_dr = 0.0, du_dphi = 0.0, du_dlambda = 0.0;
    double r_ratio_n = 1.0 / rn;  // (R/r)^n with R = 1 DU; n = 1 before the loop
    for (int n = 2; n <= forces.harmonic_degree; ++n) {
      r_ratio_n /= rn;
      double sum_r = 0.0, sum_phi = 0.0, sum_lambda = 0.0;
      for (int m = 0; m <= n; ++m) {
        const double cnm = denormalization(n, m) * forces.stokes.c[n][m];
        const double snm = denormalization(n, m) * forces.stokes.s[n][m];
        if (cnm == 0.0 && snm == 0.0) continue;
        const double cm = std::cos(m * lambda);
        const double sm = std::sin(m * lambda);
        const double trig = cnm * cm + snm * sm;
        sum_r += p[n][m] * trig;
        sum_phi += (p[n][m + 1] - m * tan_phi * p[n][m]) * trig;
        sum_lambda += m * p[n][m] * (snm * cm - cnm * sm);
      }
      du_dr += -(mu_c / (rn * rn)) * (n + 1) * r_ratio_n * sum_r;
      du_dphi += (mu_c / rn) * r_ratio_n * sum_phi;
      du_dlambda += (mu_c / rn) * r_ratio_n * sum_lambda;
    }

    if (rxy2 > 0.0) {
      const double common = du_dr / rn - r.z() * du_dphi / (rn * rn * rxy);
      acc.x() += common * r.x() - du_dlambda / rxy2 * r.y();
      acc.y() += common * r.y() + du_dlambda / rxy2 * r.x();
      acc.z() += du_dr / rn * r.z() + rxy / (rn * rn) * du_dphi;
    } else {
      // On the polar axis: only the radial derivative is defined here.
      acc += du_dr / rn * r;
    }
  }

  if (forces.drag_enabled) {
    const double omega_tu = forces.earth_rotation_rate_rad_s * units.tu_s();
    const Eigen::Vector3d omega(0.0, 0.0, omega_tu);
    const Eigen::Vector3d v_rel = state.velocity - omega.cross(r);
    const double altitude_km = units.du_to_km(rn - 1.0);
    const double rho = forces.atmosphere.density_kg_m3(altitude_km);
    // rho * C_D * (A/m) * DU is dimensionless in canonical units.
    const double coefficient = rho * forces.drag_coefficient *
                               forces.area_to_mass_m2_kg * units.du_km * 1000.0;
    acc -= 0.5 * coefficient * v_rel.norm() * v_rel;
  }

  return acc;
}

}  // namespace sruq::astro
