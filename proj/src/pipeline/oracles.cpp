#include "sruq/pipeline/oracles.hpp"

#include <cmath>

#include "sruq/errors.hpp"

namespace sruq::pipeline {

namespace {
int clamp_index(int wanted, int d) { return std::min(wanted, d - 1); }
}  // namespace

bool oracle_known(const std::string& name) { return name == "poly" || name == "expsep"; }

int oracle_output_dim(const std::string& name) {
  if (name == "poly") return 2;
  if (name == "expsep") return 1;
  throw ContractError("unknown oracle '" + name + "'");
}

Eigen::VectorXd oracle_eval(const std::string& name, const Eigen::VectorXd& xi) {
  const int d = static_cast<int>(xi.size());
  if (d < 1) throw ContractError("oracle: empty input");
  if (name == "poly") {
    const int i1 = 0, i2 = clamp_index(1, d), i3 = clamp_index(2, d);
    Eigen::VectorXd q(2);
    q(0) = xi(i1) * xi(i2) + 0.5 * xi(i3) * xi(i3);
    q(1) = xi(i1) - xi(i2) * xi(i3);
    return q;
  }
  if (name == "expsep") {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= std::exp(0.35 * xi(i));
    Eigen::VectorXd q(1);
    q(0) = prod;
    return q;
  }
  throw ContractError("unknown oracle '" + name + "'");
}

Eigen::MatrixXd oracle_eval_many(const std::string& name, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd out(inputs.rows(), oracle_output_dim(name));
  for (Eigen::Index j = 0; j < inputs.rows(); ++j)
    out.row(j) = oracle_eval(name, inputs.row(j).transpose()).transpose();
  return out;
}

}  // namespace sruq::pipeline
