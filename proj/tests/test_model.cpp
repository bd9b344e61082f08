#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "sruq/csv.hpp"
#include "sruq/errors.hpp"
#include "sruq/model.hpp"
#include "support/random_models.hpp"

using sruq::SeparatedRepresentation;
using sruq::TrainingSet;

namespace {

SeparatedRepresentation product_model() {
  // q(xi) = xi_1 * xi_2, r = 1, d = 2, M = 1.
  SeparatedRepresentation m;
  m.d = 2;
  m.M = 1;
  m.P = 2;
  m.scales = Eigen::VectorXd::Ones(1);
  m.det_factors.push_back(Eigen::VectorXd::Ones(1));
  Eigen::MatrixXd c(2, 2);
  c << 0, 1, 0, 1;
  m.coeffs.push_back(c);
  return m;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("constant rank-1 model evaluates to a constant") {
  SeparatedRepresentation m;
  m.d = 3;
  m.M = 3;
  m.P = 2;
  m.scales = Eigen::VectorXd::Constant(1, 2.0);
  Eigen::VectorXd u0(3);
  u0 << 1, 0, 0;
  m.det_factors.push_back(u0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 2);
  c.col(0).setOnes();
  m.coeffs.push_back(c);

  Eigen::VectorXd xi(3);
  xi << 0.3, -1.2, 4.0;
  const Eigen::VectorXd q = evaluate(m, xi);
  CHECK(q(0) == doctest::Approx(2.0));
  CHECK(q(1) == doctest::Approx(0.0));
  CHECK(q(2) == doctest::Approx(0.0));
}

TEST_CASE("separable monomial xi1*xi2") {
  const auto m = product_model();
  Eigen::VectorXd xi(2);
  xi << 2.0, 3.0;
  CHECK(evaluate(m, xi)(0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("data_norm basics and homogeneity") {
  Eigen::MatrixXd single(1, 2);
  single << 3.0, 4.0;
  CHECK(sruq::data_norm(single) == doctest::Approx(5.0));

  Eigen::MatrixXd two(2, 2);
  two << 1, 0, 0, 1;
  CHECK(sruq::data_norm(two) == doctest::Approx(1.0));

  std::mt19937_64 engine(5);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd r(10, 3);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = normal(engine);
  double brute = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 3; ++j) brute += r(i, j) * r(i, j);
  brute = std::sqrt(brute / 10.0);
  CHECK(sruq::data_norm(r) == doctest::Approx(brute).epsilon(1e-14));

  const double alpha = -2.7;
  CHECK(sruq::data_norm(alpha * r) ==
        doctest::Approx(std::abs(alpha) * sruq::data_norm(r)).epsilon(1e-13));

  CHECK_THROWS_AS(sruq::data_norm(Eigen::MatrixXd(0, 3)), sruq::ContractError);
}

TEST_CASE("relative residual endpoints") {
  const auto m = product_model();
  TrainingSet train;
  train.inputs.resize(4, 2);
  train.inputs << 1, 1, 2, -1, 0.5, 3, -2, -2;
  train.outputs.resize(4, 1);
  for (int j = 0; j < 4; ++j)
    train.outputs(j, 0) = train.inputs(j, 0) * train.inputs(j, 1);

  CHECK(sruq::relative_residual(m, train) == doctest::Approx(0.0).epsilon(1e-14));

  auto zero = m;
  zero.scales(0) = 0.0;
  CHECK(sruq::relative_residual(zero, train) == doctest::Approx(1.0).epsilon(1e-14));

  TrainingSet empty_out = train;
  empty_out.outputs.setZero();
  CHECK_THROWS_AS(sruq::relative_residual(m, empty_out), sruq::NumericalError);
}

TEST_CASE("evaluation is multilinear per direction") {
  std::mt19937_64 engine(17);
  std::normal_distribution<double> normal;
  const auto m = testutil::random_model(3, 2, 4, 2, 42);
  Eigen::VectorXd xi(3);
  for (int i = 0; i < 3; ++i) xi(i) = normal(engine);

  // With F(x) = evaluate(model with coefficient row x in one factor),
  // F(a + alpha b) = F(a) + alpha (F(b) - F(0)) since only one term moves.
  auto with_row = [&](const Eigen::VectorXd& x, int dir) {
    auto copy = m;
    copy.coeffs[0].row(dir) = x.transpose();
    return evaluate(copy, xi);
  };
  for (int dir = 0; dir < 3; ++dir) {
    Eigen::VectorXd ca(4), cb(4);
    for (int k = 0; k < 4; ++k) {
      ca(k) = normal(engine);
      cb(k) = normal(engine);
    }
    const double alpha = normal(engine);
    const Eigen::VectorXd lhs = with_row(ca + alpha * cb, dir);
    const Eigen::VectorXd rhs =
        with_row(ca, dir) +
        alpha * (with_row(cb, dir) - with_row(Eigen::VectorXd::Zero(4), dir));
    CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("rescaling a term leaves evaluation unchanged") {
  auto m = testutil::random_model(4, 3, 3, 3, 7);
  auto scaled = m;
  const double beta = 3.7;
  scaled.scales(1) *= beta;
  scaled.coeffs[1].row(2) /= beta;
  std::mt19937_64 engine(3);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd xi(4);
    for (int i = 0; i < 4; ++i) xi(i) = normal(engine);
    const Eigen::VectorXd a = evaluate(m, xi);
    const Eigen::VectorXd b = evaluate(scaled, xi);
    CHECK((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
  }
}

TEST_CASE("evaluate_many matches evaluate") {
  const auto m = testutil::random_model(5, 2, 4, 3, 11);
  std::mt19937_64 engine(23);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd inputs(40, 5);
  for (int j = 0; j < 40; ++j)
    for (int i = 0; i < 5; ++i) inputs(j, i) = normal(engine);
  const Eigen::MatrixXd bulk = evaluate_many(m, inputs, 2);
  for (int j = 0; j < 40; ++j) {
    const Eigen::VectorXd one = evaluate(m, inputs.row(j).transpose());
    CHECK((bulk.row(j).transpose() - one).norm() < 1e-12 * (1.0 + one.norm()));
  }
}

TEST_CASE("model JSON round trip") {
  const auto m = testutil::random_model(3, 4, 5, 2, 1234);
  const auto path = temp_file("sruq_model_roundtrip.json");
  sruq::save_model(m, path.string());
  const auto loaded = sruq::load_model(path.string());
  CHECK(loaded.d == m.d);
  CHECK(loaded.M == m.M);
  CHECK(loaded.P == m.P);
  CHECK(loaded.rank() == m.rank());
  CHECK(loaded.scales.isApprox(m.scales, 0.0));
  for (int l = 0; l < m.rank(); ++l) {
    CHECK(loaded.det_factors[l] == m.det_factors[l]);
    CHECK(loaded.coeffs[l] == m.coeffs[l]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("model file rejects r = 0 and truncation") {
  CHECK_THROWS_AS(sruq::model_from_json(R"({"format":"sr-model/1","d":1,"M":1,"P":1,)"
                                        R"("r":0,"scales":[],"det_factors":[],"coeffs":[]})"),
                  sruq::ParseError);
  const std::string full = sruq::model_to_json(testutil::random_model(2, 2, 2, 1, 5));
  CHECK_THROWS_AS(sruq::model_from_json(full.substr(0, full.size() / 2)), sruq::ParseError);
  CHECK_THROWS_AS(sruq::model_from_json("{\"format\":\"other/9\"}"), sruq::ParseError);
}

TEST_CASE("training CSV round trip") {
  TrainingSet train;
  std::mt19937_64 engine(77);
  std::normal_distribution<double> normal;
  train.inputs.resize(13, 3);
  train.outputs.resize(13, 2);
  for (int j = 0; j < 13; ++j) {
    for (int i = 0; i < 3; ++i) train.inputs(j, i) = normal(engine) * 1e3;
    for (int i = 0; i < 2; ++i) train.outputs(j, i) = normal(engine) * 1e-7;
  }
  const auto path = temp_file("sruq_training_roundtrip.csv");
  sruq::save_training_csv(train, path.string());
  const auto loaded = sruq::load_training_csv(path.string());
  CHECK(loaded.inputs == train.inputs);    // bit-exact round trip
  CHECK(loaded.outputs == train.outputs);
  std::filesystem::remove(path);
}

TEST_CASE("training CSV rejects malformed content") {
  const auto path = temp_file("sruq_training_bad.csv");
  sruq::write_text_file(path.string(), "xi_1,q_1\n1.0\n");
  CHECK_THROWS_AS(sruq::load_training_csv(path.string()), sruq::ParseError);
  sruq::write_text_file(path.string(), "a,b\n1,2\n");
  CHECK_THROWS_AS(sruq::load_training_csv(path.string()), sruq::ParseError);
  std::filesystem::remove(path);
}
