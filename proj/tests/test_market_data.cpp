#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "qpop/errors.hpp"
#include "qpop/market_data.hpp"
#include "qpop/synth.hpp"

using namespace qpop;

TEST_CASE("csv loads values, sorts rows by date") {
  std::istringstream csv(
      "date,AAA,BBB\n"
      "2020-01-03,104.03,108.12\n"
      "2020-01-01,100,100\n"
      "2020-01-02,101,102\n");
  const PriceMatrix p = load_prices_csv(csv);
  CHECK(p.days() == 3);
  CHECK(p.assets() == 2);
  CHECK(p.dates.front() == "2020-01-01");
  CHECK(p.dates.back() == "2020-01-03");
  CHECK(p.tickers == std::vector<std::string>{"AAA", "BBB"});
  CHECK(p.values(0, 0) == 100.0);
  CHECK(p.values(2, 1) == 108.12);
}

TEST_CASE("csv ingestion rejects malformed content with located messages") {
  const auto load = [](const std::string& text) {
    std::istringstream in(text);
    return load_prices_csv(in);
  };
  CHECK_THROWS_WITH_AS(load("date,AAA\n2020-01-01,100\n2020-01-02,0\n"),
                       "non-positive price at row 2, column AAA", input_error);
  CHECK_THROWS_WITH_AS(load("date,AAA\n2020-01-01,100\n2020-01-02,-3\n"),
                       "non-positive price at row 2, column AAA", input_error);
  CHECK_THROWS_WITH_AS(load("date,AAA\n2020-01-01,100\n2020-01-02,abc\n"),
                       "non-numeric price at row 2, column AAA", input_error);
  CHECK_THROWS_WITH_AS(load("date,AAA,BBB\n2020-01-01,100,101\n2020-01-02,100,\n"),
                       "missing cell at row 2, column BBB", input_error);
  CHECK_THROWS_WITH_AS(load("date,AAA,BBB\n2020-01-01,100,101\n2020-01-02,100\n"),
                       "missing cell at row 2, column BBB", input_error);
  CHECK_THROWS_AS(load("date,AAA\n2020-01-01,100\n2020-01-01,101\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA,AAA\n2020-01-01,100,101\n2020-01-02,100,101\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA\n2020-01-01,100\n"), input_error);
  CHECK_THROWS_AS(load("day,AAA\n2020-01-01,100\n2020-01-02,101\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA\n2020-13-01,100\n2020-01-02,101\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA\n2021-02-30,100\n2021-03-02,101\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA\n2020-01-01,100\n2020-01-02,101,5\n"), input_error);
  CHECK_THROWS_AS(load("date,AAA\n2020-01-01,1e400\n2020-01-02,101\n"), input_error);
}

TEST_CASE("csv round trip is lossless") {
  const PriceMatrix p = synth_history(4, 30, 99);
  std::ostringstream out;
  write_prices_csv(p, out);
  std::istringstream in(out.str());
  const PriceMatrix q = load_prices_csv(in);
  CHECK(q.dates == p.dates);
  CHECK(q.tickers == p.tickers);
  REQUIRE(q.values.rows() == p.values.rows());
  CHECK((q.values - p.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("daily returns and compounded window returns") {
  const PriceMatrix p = testutil::make_prices(
      {"AAA", "BBB"}, {{100.0, 100.0}, {101.0, 102.0}, {104.03, 108.12}});
  const ReturnsMatrix r = daily_returns(p);
  REQUIRE(r.rows() == 2);
  CHECK(r.values(0, 0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(r.values(1, 0) == doctest::Approx(0.03).epsilon(1e-14));
  CHECK(r.values(0, 1) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(r.values(1, 1) == doctest::Approx(0.06).epsilon(1e-14));

  const Eigen::VectorXd cr = compounded_returns(p);
  CHECK(cr[0] == doctest::Approx(1.01 * 1.03 - 1.0).epsilon(1e-14));
  CHECK(cr[1] == doctest::Approx(1.02 * 1.06 - 1.0).epsilon(1e-14));
}

TEST_CASE("covariance matches the hand-computed 2x2 oracle") {
  // Returns a = [0.01, 0.03], b = [0.02, 0.06]; centered cross products over
  // denominator 1 give [[2e-4, 4e-4], [4e-4, 8e-4]].
  const PriceMatrix p = testutil::make_prices(
      {"AAA", "BBB"}, {{100.0, 100.0}, {101.0, 102.0}, {104.03, 108.12}});
  const CovarianceMatrix c = covariance(daily_returns(p));
  CHECK(c.values(0, 0) == doctest::Approx(2e-4).epsilon(1e-10));
  CHECK(c.values(0, 1) == doctest::Approx(4e-4).epsilon(1e-10));
  CHECK(c.values(1, 0) == doctest::Approx(4e-4).epsilon(1e-10));
  CHECK(c.values(1, 1) == doctest::Approx(8e-4).epsilon(1e-10));
}

TEST_CASE("covariance is symmetric positive semidefinite on random data") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int assets = 2 + static_cast<int>(seed % 5);
    const PriceMatrix p = synth_history(assets, 40, seed);
    const CovarianceMatrix c = covariance(daily_returns(p));
    CHECK((c.values - c.values.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.values, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    CHECK((c.values.diagonal().array() >= 0.0).all());
  }
}

TEST_CASE("covariance requires two return rows") {
  const PriceMatrix p = testutil::make_prices({"AAA"}, {{100.0}, {101.0}});
  CHECK_THROWS_AS(covariance(daily_returns(p)), input_error);
}

TEST_CASE("price matrix invariants") {
  Eigen::MatrixXd v(2, 1);
  v << 100.0, 101.0;
  CHECK_THROWS_AS(PriceMatrix::create({"2020-01-02", "2020-01-01"}, {"AAA"}, v), input_error);
  CHECK_THROWS_AS(PriceMatrix::create({"2020-01-01", "2020-01-01"}, {"AAA"}, v), input_error);
  CHECK_THROWS_AS(PriceMatrix::create({"2020-01-01"}, {"AAA"}, v), input_error);
  CHECK_THROWS_AS(PriceMatrix::create({"2020-01-01", "2020-01-02"}, {""}, v), input_error);

  const PriceMatrix ok = PriceMatrix::create({"2020-01-01", "2020-01-02"}, {"AAA"}, v);
  CHECK(ok.days() == 2);
}

TEST_CASE("column selection keeps dates and order") {
  const PriceMatrix p = synth_history(5, 10, 3);
  const PriceMatrix sub = p.select_columns({0, 3});
  CHECK(sub.assets() == 2);
  CHECK(sub.tickers[0] == p.tickers[0]);
  CHECK(sub.tickers[1] == p.tickers[3]);
  CHECK(sub.dates == p.dates);
  CHECK((sub.values.col(1) - p.values.col(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.column_of(p.tickers[3]) == 3);
  CHECK(p.column_of("nope") == -1);
}

TEST_CASE("synth histories are deterministic and valid") {
  const PriceMatrix a = synth_history(6, 50, 42);
  const PriceMatrix b = synth_history(6, 50, 42);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.dates == b.dates);
  const PriceMatrix c = synth_history(6, 50, 43);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a.values.array() > 0.0).all());
}
