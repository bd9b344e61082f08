#include "sruq/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sruq/csv.hpp"
#include "sruq/errors.hpp"
#include "sruq/parallel.hpp"

namespace sruq {

namespace {
constexpr const char* kModelFormat = "sr-model/1";

void require(bool cond, const std::string& message) {
  if (!cond) throw ContractError(message);
}
}  // namespace

void SeparatedRepresentation::validate() const {
  require(d >= 1 && M >= 1 && P >= 1, "SeparatedRepresentation: d, M, P must be >= 1");
  const int r = rank();
  require(r >= 1, "SeparatedRepresentation: rank must be >= 1");
  require(static_cast<int>(det_factors.size()) == r &&
              static_cast<int>(coeffs.size()) == r,
          "SeparatedRepresentation: term count mismatch");
  for (int l = 0; l < r; ++l) {
    require(det_factors[l].size() == M, "SeparatedRepresentation: det_factor length != M");
    require(coeffs[l].rows() == d && coeffs[l].cols() == P,
            "SeparatedRepresentation: coefficient block is not d x P");
    if (!(scales(l) >= 0.0))
      throw ContractError("SeparatedRepresentation: scales must be nonnegative");
    if (!det_factors[l].allFinite() || !coeffs[l].allFinite())
      throw ContractError("SeparatedRepresentation: non-finite entries");
  }
  if (!scales.allFinite()) throw ContractError("SeparatedRepresentation: non-finite scales");
}

void TrainingSet::validate() const {
  require(inputs.rows() >= 1, "TrainingSet: N must be >= 1");
  require(inputs.rows() == outputs.rows(), "TrainingSet: inputs/outputs row mismatch");
  require(inputs.cols() >= 1 && outputs.cols() >= 1, "TrainingSet: empty columns");
  if (!inputs.allFinite() || !outputs.allFinite())
    throw ContractError("TrainingSet: non-finite entries");
}

Eigen::VectorXd evaluate(const SeparatedRepresentation& model, const Eigen::VectorXd& xi) {
  if (xi.size() != model.d)
    throw ContractError("evaluate: input dimension mismatch");
  const BasisSpec basis = model.basis();
  Eigen::MatrixXd psi(model.d, model.P);
  for (int i = 0; i < model.d; ++i) psi.row(i) = eval_basis(basis, xi(i)).transpose();

  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.M);
  for (int l = 0; l < model.rank(); ++l) {
    double prod = 1.0;
    for (int i = 0; i < model.d; ++i) prod *= psi.row(i).dot(model.coeffs[l].row(i));
    out += model.scales(l) * prod * model.det_factors[l];
  }
  return out;
}

Eigen::MatrixXd evaluate_many(const SeparatedRepresentation& model,
                              const Eigen::MatrixXd& inputs, int workers) {
  if (inputs.cols() != model.d)
    throw ContractError("evaluate_many: input dimension mismatch");
  const Eigen::Index n = inputs.rows();
  Eigen::MatrixXd out(n, model.M);
  const BasisSpec basis = model.basis();
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t b, std::size_t e) {
    const Eigen::Index rows = static_cast<Eigen::Index>(e - b);
    // Per-direction basis values for the chunk, then a running product per term.
    std::vector<Eigen::MatrixXd> psi(model.d);
    for (int i = 0; i < model.d; ++i)
      psi[i] = eval_basis_rows(basis, inputs.col(i).segment(b, rows));
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(rows, model.M);
    Eigen::VectorXd prod(rows);
    for (int l = 0; l < model.rank(); ++l) {
      prod = psi[0] * model.coeffs[l].row(0).transpose();
      for (int i = 1; i < model.d; ++i)
        prod.array() *= (psi[i] * model.coeffs[l].row(i).transpose()).array();
      block.noalias() += (model.scales(l) * prod) * model.det_factors[l].transpose();
    }
    out.middleRows(b, rows) = block;
  });
  return out;
}

double data_norm(const Eigen::MatrixXd& residuals) {
  if (residuals.rows() == 0) throw ContractError("data_norm: empty sample set");
  return std::sqrt(residuals.squaredNorm() / static_cast<double>(residuals.rows()));
}

double relative_residual(const SeparatedRepresentation& model, const TrainingSet& train) {
  if (train.input_dim() != model.d || train.output_dim() != model.M)
    throw ContractError("relative_residual: model/training dimension mismatch");
  const double denom = data_norm(train.outputs);
  if (denom == 0.0)
    throw NumericalError(
        "relative_residual: training outputs are identically zero, gamma undefined");
  const Eigen::MatrixXd qhat = evaluate_many(model, train.inputs);
  return data_norm(train.outputs - qhat) / denom;
}

namespace {

nlohmann::json model_json(const SeparatedRepresentation& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["d"] = model.d;
  j["M"] = model.M;
  j["P"] = model.P;
  j["r"] = model.rank();
  j["scales"] = std::vector<double>(model.scales.data(),
                                    model.scales.data() + model.scales.size());
  auto det = nlohmann::json::array();
  for (const auto& u : model.det_factors)
    det.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  j["det_factors"] = det;
  auto terms = nlohmann::json::array();
  for (const auto& c : model.coeffs) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < c.rows(); ++i) {
      Eigen::VectorXd row = c.row(i);
      rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    terms.push_back(rows);
  }
  j["coeffs"] = terms;
  return j;
}

SeparatedRepresentation model_from(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != kModelFormat)
    throw ParseError("model file: missing or unsupported format tag (expected sr-model/1)");
  SeparatedRepresentation m;
  m.d = j.at("d").get<int>();
  m.M = j.at("M").get<int>();
  m.P = j.at("P").get<int>();
  const int r = j.at("r").get<int>();
  if (r < 1) throw ParseError("model file: rank must be >= 1");
  const auto scales = j.at("scales").get<std::vector<double>>();
  if (static_cast<int>(scales.size()) != r)
    throw ParseError("model file: scales length != r");
  m.scales = Eigen::Map<const Eigen::VectorXd>(scales.data(), r);
  for (const auto& u : j.at("det_factors")) {
    const auto v = u.get<std::vector<double>>();
    m.det_factors.push_back(
        Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  for (const auto& term : j.at("coeffs")) {
    Eigen::MatrixXd c(m.d, m.P);
    if (static_cast<int>(term.size()) != m.d)
      throw ParseError("model file: coefficient block row count != d");
    int i = 0;
    for (const auto& row : term) {
      const auto v = row.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != m.P)
        throw ParseError("model file: coefficient row length != P");
      c.row(i++) = Eigen::Map<const Eigen::VectorXd>(v.data(), m.P).transpose();
    }
    m.coeffs.push_back(std::move(c));
  }
  try {
    m.validate();
  } catch (const ContractError& err) {
    throw ParseError(std::string("model file: ") + err.what());
  }
  return m;
}

}  // namespace

std::string model_to_json(const SeparatedRepresentation& model) {
  return model_json(model).dump(2) + "\n";
}

SeparatedRepresentation model_from_json(const std::string& text) {
  try {
    return model_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("model file: ") + err.what());
  }
}

void save_model(const SeparatedRepresentation& model, const std::string& path) {
  model.validate();
  write_text_file(path, model_to_json(model));
}

SeparatedRepresentation load_model(const std::string& path) {
  try {
    return model_from_json(read_text_file(path));
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

std::string training_to_csv(const TrainingSet& train) {
  train.validate();
  std::ostringstream out;
  const Eigen::Index d = train.input_dim();
  const Eigen::Index m = train.output_dim();
  for (Eigen::Index i = 0; i < d; ++i) out << "xi_" << (i + 1) << ",";
  for (Eigen::Index j = 0; j < m; ++j) {
    out << "q_" << (j + 1);
    if (j + 1 < m) out << ",";
  }
  out << "\n";
  for (Eigen::Index row = 0; row < train.size(); ++row) {
    for (Eigen::Index i = 0; i < d; ++i) out << format_double(train.inputs(row, i)) << ",";
    for (Eigen::Index j = 0; j < m; ++j) {
      out << format_double(train.outputs(row, j));
      if (j + 1 < m) out << ",";
    }
    out << "\n";
  }
  return out.str();
}

void save_training_csv(const TrainingSet& train, const std::string& path) {
  write_text_file(path, training_to_csv(train));
}

TrainingSet load_training_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_csv_line(line);
  Eigen::Index d = 0, m = 0;
  for (const auto& name : header) {
    if (name.rfind("xi_", 0) == 0)
      ++d;
    else if (name.rfind("q_", 0) == 0)
      ++m;
    else
      throw ParseError(path + ": unexpected header field '" + name + "'");
  }
  if (d == 0 || m == 0) throw ParseError(path + ": header must list xi_* and q_* columns");

  std::vector<std::vector<double>> rows;
  Eigen::Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != d + m)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(d + m) + " fields, got " +
                       std::to_string(fields.size()));
    std::vector<double> row(d + m);
    for (Eigen::Index i = 0; i < d + m; ++i)
      row[i] = parse_double(fields[i], path + ":" + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no samples");

  TrainingSet train;
  train.inputs.resize(static_cast<Eigen::Index>(rows.size()), d);
  train.outputs.resize(static_cast<Eigen::Index>(rows.size()), m);
  for (Eigen::Index r = 0; r < train.inputs.rows(); ++r) {
    for (Eigen::Index i = 0; i < d; ++i) train.inputs(r, i) = rows[r][i];
    for (Eigen::Index j = 0; j < m; ++j) train.outputs(r, j) = rows[r][d + j];
  }
  train.validate();
  return train;
}

}  // namespace sruq
