#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qpop/errors.hpp"
#include "qpop/rng.hpp"
#include "qpop/scenario.hpp"
#include "qpop/synth.hpp"

using namespace qpop;

TEST_CASE("seed mixing matches the splitmix64 reference stream") {
  // First two outputs of splitmix64 seeded with 0.
  CHECK(mix_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(mix_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
  CHECK(mix_seed(7, 3) != mix_seed(7, 4));
  CHECK(mix_seed(7, 3) != mix_seed(8, 3));
}

TEST_CASE("inverse normal cdf hits reference quantiles") {
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.999999) == doctest::Approx(4.753424308822899).epsilon(1e-9));
  for (double p : {0.001, 0.1, 0.3, 0.7, 0.9, 0.999})
    CHECK(inverse_normal_cdf(p) == doctest::Approx(-inverse_normal_cdf(1.0 - p)).epsilon(1e-9));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), numeric_error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), numeric_error);
}

TEST_CASE("standard normal samples are deterministic with sane moments") {
  const Eigen::MatrixXd a = sample_standard_normal(250, 5, 21);
  const Eigen::MatrixXd b = sample_standard_normal(250, 5, 21);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - sample_standard_normal(250, 5, 22)).cwiseAbs().maxCoeff() > 0.0);

  const double mean = a.mean();
  const double var = (a.array() - mean).square().sum() / (a.size() - 1.0);
  CHECK(std::fabs(mean) < 0.1);
  CHECK(var == doctest::Approx(1.0).epsilon(0.15));
  CHECK_THROWS_AS(sample_standard_normal(1, 3, 0), input_error);
}

TEST_CASE("cholesky factors a PD matrix exactly") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 2.0, 2.0, 5.0;
  const CholeskyFactor f = cholesky(CovarianceMatrix::create({"a", "b"}, m));
  CHECK(f.values(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.values(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.values(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.values(0, 1) == 0.0);
  CHECK((f.values * f.values.transpose() - m).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("cholesky on a rank deficient matrix: plain call fails, escalation recovers") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0, 1.0, 1.0;
  const CovarianceMatrix cov = CovarianceMatrix::create({"a", "b"}, m);
  CHECK_THROWS_AS(cholesky(cov), numeric_error);

  const CholeskyFactor f = cholesky_auto(cov);
  CHECK((f.values.diagonal().array() > 0.0).all());

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(cholesky_auto(CovarianceMatrix::create({"a", "b"}, zero)), numeric_error);
  CHECK_THROWS_AS(cholesky(cov, -1e-9), input_error);
}

TEST_CASE("covariance transform reproduces the target exactly in sample") {
  const PriceMatrix hist = synth_history(4, 80, 5);
  const CovarianceMatrix target = covariance(daily_returns(hist));
  const Eigen::MatrixXd x = sample_standard_normal(60, 4, 17);
  const Eigen::MatrixXd y = fit_covariance_transform(x, target);
  REQUIRE(y.rows() == 60);

  const Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd cov_y = (centered.transpose() * centered) / (y.rows() - 1.0);
  CHECK((cov_y - target.values).cwiseAbs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(fit_covariance_transform(sample_standard_normal(10, 2, 1), target),
                  input_error);
}

TEST_CASE("find_bias solves the compounding equation") {
  // (1.1 + b)(0.9 + b) = 0.99 has the exact root b = 0.
  Eigen::VectorXd y(2);
  y << 0.1, -0.1;
  CHECK(std::fabs(find_bias(y, -0.01)) <= 1e-12);

  std::mt19937_64 eng(33);
  Eigen::VectorXd daily(250);
  for (int k = 0; k < 250; ++k) daily[k] = 0.02 * inverse_normal_cdf(uniform_open(eng()));
  for (double target : {-0.3, 0.0, 0.05, 0.5}) {
    const double b = find_bias(daily, target);
    double sum = 0.0;
    for (int k = 0; k < 250; ++k) sum += std::log1p(daily[k] + b);
    CHECK(std::fabs(sum - std::log1p(target)) <= 1e-12);
    CHECK(daily.minCoeff() + b > -1.0);
  }

  CHECK_THROWS_AS(find_bias(y, -1.0), input_error);
  CHECK_THROWS_AS(find_bias(Eigen::VectorXd(), 0.1), input_error);
}

TEST_CASE("find_bias handles wide spreads and extreme targets") {
  Eigen::VectorXd y(3);
  y << -0.5, 0.6, 0.1;
  for (double target : {-0.9, 9.0}) {
    const double b = find_bias(y, target);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += std::log1p(y[k] + b);
    CHECK(std::fabs(sum - std::log1p(target)) <= 1e-12);
  }
}

TEST_CASE("price reconstruction compounds returns from the initial row") {
  Eigen::VectorXd p0(1);
  p0 << 100.0;
  ReturnsMatrix r;
  r.tickers = {"AAA"};
  r.values.resize(2, 1);
  r.values << 0.1, -0.05;
  const PriceMatrix p = reconstruct_prices(p0, r, "2022-05-30");
  REQUIRE(p.days() == 3);
  CHECK(p.values(0, 0) == 100.0);
  CHECK(p.values(1, 0) == doctest::Approx(110.0).epsilon(1e-14));
  CHECK(p.values(2, 0) == doctest::Approx(104.5).epsilon(1e-14));
  CHECK(p.dates == std::vector<std::string>{"2022-05-30", "2022-05-31", "2022-06-01"});

  Eigen::VectorXd bad(1);
  bad << -1.0;
  CHECK_THROWS_AS(reconstruct_prices(bad, r), input_error);
}

TEST_CASE("generated scenarios hit targets and reproduce the covariance") {
  const PriceMatrix history = synth_history(4, 60, 7);
  ScenarioSpec spec;
  spec.target_returns.resize(4);
  spec.target_returns << 0.05, -0.3, 0.0, 0.5;
  spec.initial_values = history.values.row(history.days() - 1).transpose();
  spec.horizon_returns = 30;
  spec.seed = 11;

  const PriceMatrix scenario = generate_scenario(history, spec);
  REQUIRE(scenario.days() == 31);
  CHECK(scenario.tickers == history.tickers);
  CHECK((scenario.values.row(0).transpose() - spec.initial_values).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(parse_iso_date(scenario.dates.front()) == parse_iso_date(history.dates.back()) + 1);

  const Eigen::VectorXd achieved = compounded_returns(scenario);
  CHECK((achieved - spec.target_returns).cwiseAbs().maxCoeff() <= 1e-10);

  const CovarianceMatrix hist_cov = covariance(daily_returns(history));
  const CovarianceMatrix scen_cov = covariance(daily_returns(scenario));
  CHECK((hist_cov.values - scen_cov.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("scenario generation is deterministic in the seed") {
  const PriceMatrix history = synth_history(3, 40, 2);
  ScenarioSpec spec;
  spec.target_returns = Eigen::VectorXd::Constant(3, 0.08);
  spec.initial_values = Eigen::VectorXd::Constant(3, 50.0);
  spec.horizon_returns = 20;
  spec.seed = 5;

  const PriceMatrix a = generate_scenario(history, spec);
  const PriceMatrix b = generate_scenario(history, spec);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.dates == b.dates);

  spec.seed = 6;
  const PriceMatrix c = generate_scenario(history, spec);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("feeding achieved returns back is a fixed point") {
  const PriceMatrix history = synth_history(3, 50, 9);
  ScenarioSpec spec;
  spec.target_returns.resize(3);
  spec.target_returns << 0.1, -0.05, 0.2;
  spec.initial_values = Eigen::VectorXd::Constant(3, 100.0);
  spec.horizon_returns = 25;
  spec.seed = 4;

  const PriceMatrix first = generate_scenario(history, spec);
  spec.target_returns = compounded_returns(first);
  const PriceMatrix second = generate_scenario(history, spec);
  CHECK((compounded_returns(second) - spec.target_returns).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("scenario spec validation") {
  const PriceMatrix history = synth_history(3, 30, 1);
  ScenarioSpec spec;
  spec.target_returns = Eigen::VectorXd::Constant(3, 0.1);
  spec.initial_values = Eigen::VectorXd::Constant(3, 10.0);
  spec.horizon_returns = 3;  // needs at least N + 1 = 4
  CHECK_THROWS_AS(generate_scenario(history, spec), input_error);

  spec.horizon_returns = 10;
  spec.target_returns[1] = -1.0;
  CHECK_THROWS_AS(generate_scenario(history, spec), input_error);

  spec.target_returns[1] = 0.1;
  spec.initial_values[2] = 0.0;
  CHECK_THROWS_AS(generate_scenario(history, spec), input_error);

  spec.initial_values[2] = 10.0;
  spec.target_returns = Eigen::VectorXd::Constant(2, 0.1);
  CHECK_THROWS_AS(generate_scenario(history, spec), input_error);
}
