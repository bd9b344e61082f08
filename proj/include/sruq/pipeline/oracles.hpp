#pragma once

#include <string>

#include <Eigen/Core>

namespace sruq::pipeline {

/// Built-in test maps that substitute for orbit propagation when a pipeline
/// runs with --oracle. Both accept any d >= 1.
///
/// "poly": M = 2 polynomial map
///   q1 = xi_1 xi_2 + 0.5 xi_3^2,  q2 = xi_1 - xi_2 xi_3
/// (indices clamped to d when d < 3).
///
/// "expsep": M = 1 rank-one product of non-polynomial univariate factors,
///   q = prod_i exp(0.35 xi_i); exactly separable but outside any finite
///   polynomial degree, so fits carry a truncation floor.
Eigen::VectorXd oracle_eval(const std::string& name, const Eigen::VectorXd& xi);

Eigen::MatrixXd oracle_eval_many(const std::string& name, const Eigen::MatrixXd& inputs);

int oracle_output_dim(const std::string& name);

bool oracle_known(const std::string& name);

}  // namespace sruq::pipeline
