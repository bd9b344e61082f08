#pragma once

// Random well-conditioned separated representations for property tests.

#include <cstdint>
#include <random>

#include "sruq/model.hpp"

namespace testutil {

inline sruq::SeparatedRepresentation random_model(int d, int m, int p, int r,
                                                  std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.2, 2.0);
  sruq::SeparatedRepresentation model;
  model.d = d;
  model.M = m;
  model.P = p;
  model.scales.resize(r);
  for (int l = 0; l < r; ++l) {
    model.scales(l) = unif(engine);
    Eigen::VectorXd u0(m);
    for (int j = 0; j < m; ++j) u0(j) = normal(engine);
    if (u0.norm() == 0.0) u0(0) = 1.0;
    model.det_factors.push_back(u0.normalized());
    Eigen::MatrixXd c(d, p);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < p; ++k) c(i, k) = normal(engine);
    for (int i = 0; i < d; ++i) {
      const double norm = c.row(i).norm();
      if (norm > 0.0) c.row(i) /= norm;
    }
    model.coeffs.push_back(c);
  }
  return model;
}

}  // namespace testutil
