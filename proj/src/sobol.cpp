#include "sruq/sobol.hpp"

#include <cmath>
#include <sstream>

#include "sruq/csv.hpp"
#include "sruq/errors.hpp"
#include "sruq/parallel.hpp"
#include "sruq/rng.hpp"
#include "sruq/statistics.hpp"

namespace sruq {

SobolResult sobol_indices_from_samples(const SeparatedRepresentation& model,
                                       const Eigen::MatrixXd& base,
                                       const Eigen::MatrixXd& alt, int workers) {
  if (base.rows() != alt.rows() || base.cols() != alt.cols())
    throw ContractError("sobol: sample sets must have identical shape");
  if (base.rows() < 2) throw ContractError("sobol: need at least 2 samples");
  if (base.cols() != model.d) throw ContractError("sobol: sample dimension mismatch");

  const Eigen::Index n = base.rows();
  const int d = model.d;
  const int m = model.M;

  SobolResult result;
  result.n_samples = n;
  result.indices.resize(d, m);
  result.variance = analytic_covariance(model).diagonal();
  result.degenerate.assign(m, false);

  const Eigen::VectorXd mean = analytic_mean(model);
  const Eigen::MatrixXd q_base = evaluate_many(model, base, workers);

  // U_{i,m} = 1/(N-1) sum_j q_m(base_j) q_m(alt_j with coordinate i taken
  // from base_j); one mixed evaluation pass per input direction.
  Eigen::MatrixXd u(d, m);
  parallel_for(static_cast<std::size_t>(d), workers, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      Eigen::MatrixXd mixed = alt;
      mixed.col(static_cast<Eigen::Index>(i)) = base.col(static_cast<Eigen::Index>(i));
      const Eigen::MatrixXd q_mixed = evaluate_many(model, mixed);
      u.row(static_cast<Eigen::Index>(i)) =
          (q_base.array() * q_mixed.array()).colwise().sum() / static_cast<double>(n - 1);
    }
  });

  for (int j = 0; j < m; ++j) {
    if (result.variance(j) <= 0.0) {
      result.degenerate[j] = true;
      result.indices.col(j).setZero();
      continue;
    }
    result.indices.col(j) =
        (u.col(j).array() - mean(j) * mean(j)) / result.variance(j);
  }
  return result;
}

SobolResult sobol_indices(const SeparatedRepresentation& model, Eigen::Index n,
                          std::uint64_t seed_a, std::uint64_t seed_b, int workers) {
  if (n < 2) throw ContractError("sobol: need at least 2 samples");
  const Eigen::MatrixXd base = standard_normal_matrix(n, model.d, seed_a, workers);
  const Eigen::MatrixXd alt = standard_normal_matrix(n, model.d, seed_b, workers);
  SobolResult result = sobol_indices_from_samples(model, base, alt, workers);
  result.seed_a = seed_a;
  result.seed_b = seed_b;
  return result;
}

std::string sobol_to_csv(const SobolResult& result) {
  std::ostringstream out;
  out << "# first-order Sobol indices, rows = inputs, columns = QoIs\n";
  out << "# n_samples=" << result.n_samples << "\n";
  out << "# seed_a=" << result.seed_a << " seed_b=" << result.seed_b << "\n";
  out << "# variance=";
  for (Eigen::Index j = 0; j < result.variance.size(); ++j) {
    if (j) out << ",";
    out << format_double(result.variance(j));
  }
  out << "\n# degenerate=";
  for (std::size_t j = 0; j < result.degenerate.size(); ++j) {
    if (j) out << ",";
    out << (result.degenerate[j] ? 1 : 0);
  }
  out << "\ninput";
  for (Eigen::Index j = 0; j < result.indices.cols(); ++j) out << ",q_" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < result.indices.rows(); ++i) {
    out << "xi_" << (i + 1);
    for (Eigen::Index j = 0; j < result.indices.cols(); ++j)
      out << "," << format_double(result.indices(i, j));
    out << "\n";
  }
  return out.str();
}

FactorVariability factor_variability_table(const SeparatedRepresentation& model,
                                           int grid_points) {
  if (grid_points < 2) throw ContractError("factor_variability_table: grid too small");
  FactorVariability table;
  table.grid = Eigen::VectorXd::LinSpaced(grid_points, -4.0, 4.0);
  const Eigen::MatrixXd psi = eval_basis_rows(model.basis(), table.grid);
  for (int l = 0; l < model.rank(); ++l) {
    Eigen::MatrixXd vals(model.d, grid_points);
    for (int i = 0; i < model.d; ++i)
      vals.row(i) = (psi * model.coeffs[l].row(i).transpose()).cwiseAbs().transpose();
    table.values.push_back(std::move(vals));
  }
  return table;
}

std::string factor_variability_to_csv(const FactorVariability& table) {
  std::ostringstream out;
  out << "direction,rank,xi,abs_u\n";
  for (std::size_t l = 0; l < table.values.size(); ++l)
    for (Eigen::Index i = 0; i < table.values[l].rows(); ++i)
      for (Eigen::Index g = 0; g < table.grid.size(); ++g)
        out << (i + 1) << "," << (l + 1) << "," << format_double(table.grid(g)) << ","
            << format_double(table.values[l](i, g)) << "\n";
  return out.str();
}

}  // namespace sruq
