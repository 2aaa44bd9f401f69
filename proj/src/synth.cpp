#include "qpop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "qpop/dates.hpp"
#include "qpop/errors.hpp"
#include "qpop/rng.hpp"

namespace qpop {

PriceMatrix synth_history(int n_assets, int days, std::uint64_t seed) {
  if (n_assets < 1) throw input_error("synth needs at least 1 asset");
  if (days < 3) throw input_error("synth needs at least 3 days");

  std::mt19937_64 eng(seed);
  const auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * uniform_open(eng());
  };
  const auto normal = [&] { return inverse_normal_cdf(uniform_open(eng())); };

  // Per-asset parameters first, then day-major returns; the draw order is
  // part of the determinism contract.
  std::vector<double> start(static_cast<size_t>(n_assets));
  std::vector<double> drift(static_cast<size_t>(n_assets));
  std::vector<double> vol(static_cast<size_t>(n_assets));
  std::vector<double> load(static_cast<size_t>(n_assets));
  for (int i = 0; i < n_assets; ++i) {
    start[static_cast<size_t>(i)] = uniform(20.0, 180.0);
    drift[static_cast<size_t>(i)] = uniform(-0.001, 0.002);
    vol[static_cast<size_t>(i)] = uniform(0.004, 0.03);
    load[static_cast<size_t>(i)] = uniform(-0.5, 0.8);
  }

  Eigen::MatrixXd prices(days, n_assets);
  for (int i = 0; i < n_assets; ++i) prices(0, i) = start[static_cast<size_t>(i)];
  for (int k = 1; k < days; ++k) {
    const double common = normal();
    for (int i = 0; i < n_assets; ++i) {
      const double rho = load[static_cast<size_t>(i)];
      const double shock = rho * common + std::sqrt(1.0 - rho * rho) * normal();
      double r = drift[static_cast<size_t>(i)] + vol[static_cast<size_t>(i)] * shock;
      r = std::clamp(r, -0.4, 0.4);
      prices(k, i) = prices(k - 1, i) * (1.0 + r);
    }
  }

  const int width =
      std::min(9, std::max(2, static_cast<int>(std::to_string(n_assets - 1).size())));
  std::vector<std::string> tickers;
  tickers.reserve(static_cast<size_t>(n_assets));
  for (int i = 0; i < n_assets; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "A%0*d", width, i);
    tickers.emplace_back(buf);
  }

  const std::int64_t day0 = parse_iso_date("2018-01-01");
  std::vector<std::string> dates;
  dates.reserve(static_cast<size_t>(days));
  for (int k = 0; k < days; ++k) dates.push_back(format_iso_date(day0 + k));

  return PriceMatrix::create(std::move(dates), std::move(tickers), std::move(prices));
}

}  // namespace qpop
