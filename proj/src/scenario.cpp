#include "qpop/scenario.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "qpop/dates.hpp"
#include "qpop/errors.hpp"
#include "qpop/rng.hpp"

namespace qpop {

void ScenarioSpec::validate(int n_assets) const {
  if (target_returns.size() != n_assets)
    throw input_error("scenario target count does not match asset count");
  if (initial_values.size() != n_assets)
    throw input_error("scenario initial value count does not match asset count");
  for (Eigen::Index i = 0; i < target_returns.size(); ++i) {
    if (!std::isfinite(target_returns[i]) || target_returns[i] <= -1.0)
      throw input_error("target return must be > -1 (asset " + std::to_string(i) + ")");
    if (!std::isfinite(initial_values[i]) || initial_values[i] <= 0.0)
      throw input_error("initial value must be > 0 (asset " + std::to_string(i) + ")");
  }
  const int min_r = std::max(2, n_assets + 1);
  if (horizon_returns < min_r)
    throw input_error("horizon must be at least " + std::to_string(min_r) +
                      " returns for " + std::to_string(n_assets) + " assets");
}

CholeskyFactor cholesky(const CovarianceMatrix& cov, double jitter) {
  if (jitter < 0.0 || !std::isfinite(jitter)) throw input_error("jitter must be >= 0");
  Eigen::MatrixXd m = cov.values;
  m.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw numeric_error("cholesky failed: matrix not positive definite");
  Eigen::MatrixXd lower = llt.matrixL();
  if ((lower.diagonal().array() <= 0.0).any())
    throw numeric_error("cholesky failed: non-positive pivot");
  const double err = (lower * lower.transpose() - m).cwiseAbs().maxCoeff();
  if (!(err <= 1e-10))
    throw numeric_error("cholesky reconstruction error " + std::to_string(err));
  CholeskyFactor f;
  f.tickers = cov.tickers;
  f.values = std::move(lower);
  return f;
}

CholeskyFactor cholesky_auto(const CovarianceMatrix& cov) {
  try {
    return cholesky(cov, 0.0);
  } catch (const numeric_error&) {
  }
  const double scale = cov.values.trace() / static_cast<double>(cov.values.rows());
  if (scale > 0.0) {
    for (double jitter = 1e-10 * scale; jitter <= 1e-6 * scale * (1.0 + 1e-9); jitter *= 10.0) {
      try {
        return cholesky(cov, jitter);
      } catch (const numeric_error&) {
      }
    }
  }
  throw numeric_error("covariance stays non positive definite after jitter escalation");
}

Eigen::MatrixXd sample_standard_normal(int rows, int cols, std::uint64_t seed) {
  if (rows < 2 || cols < 1) throw input_error("normal sample needs rows >= 2 and cols >= 1");
  std::mt19937_64 eng(seed);
  Eigen::MatrixXd x(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) x(r, c) = inverse_normal_cdf(uniform_open(eng()));
  return x;
}

Eigen::MatrixXd fit_covariance_transform(const Eigen::MatrixXd& samples,
                                         const CovarianceMatrix& target) {
  if (samples.cols() != target.values.rows())
    throw input_error("sample columns do not match target covariance size");
  if (samples.rows() < 2) throw input_error("need at least 2 sample rows");

  const Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  Eigen::MatrixXd sample_cov = (centered.transpose() * centered) /
                               static_cast<double>(samples.rows() - 1);
  sample_cov = ((sample_cov + sample_cov.transpose()) * 0.5).eval();

  const CholeskyFactor lx =
      cholesky_auto(CovarianceMatrix::create(target.tickers, std::move(sample_cov)));
  const CholeskyFactor lh = cholesky_auto(target);

  // Y = Xc * Lx^-T * Lh^T; solve the triangular system instead of inverting.
  const Eigen::MatrixXd map = lx.values.transpose()
                                  .triangularView<Eigen::Upper>()
                                  .solve(lh.values.transpose());
  return centered * map;
}

double find_bias(const Eigen::VectorXd& centered_returns, double target_return) {
  if (centered_returns.size() < 1) throw input_error("find_bias needs at least one return");
  if (!(target_return > -1.0) || !std::isfinite(target_return))
    throw input_error("target return must be > -1");

  const double goal = std::log1p(target_return);
  const auto g = [&](double b) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < centered_returns.size(); ++k) {
      const double arg = 1.0 + centered_returns[k] + b;
      if (!(arg > 0.0)) return -std::numeric_limits<double>::infinity();
      sum += std::log(arg);
    }
    return sum - goal;
  };

  const double edge = -1.0 - centered_returns.minCoeff();
  double lo = edge + 1e-12;
  // g -> -inf at the domain edge; walk toward it until the sign is right.
  for (int i = 0; i < 400 && g(lo) >= 0.0; ++i) {
    const double next = edge + (lo - edge) * 1e-3;
    if (next <= edge || next == lo) break;
    lo = next;
  }
  if (!(g(lo) < 0.0)) throw numeric_error("find_bias: could not bracket the root from below");

  double hi = lo;
  double step = std::max(1.0, std::fabs(target_return));
  int expand = 0;
  while (g(hi) < 0.0) {
    hi += step;
    step *= 2.0;
    if (++expand > 200) throw numeric_error("find_bias: could not bracket the root from above");
  }

  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 500; ++i) {
    mid = lo + 0.5 * (hi - lo);
    const double gm = g(mid);
    if (std::fabs(gm) <= 1e-13) return mid;
    if (gm < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::fabs(mid) * 4e-16 + 1e-300) break;
  }
  return mid;
}

PriceMatrix reconstruct_prices(const Eigen::VectorXd& initial_values,
                               const ReturnsMatrix& returns, const std::string& start_date) {
  const Eigen::Index n = returns.values.cols();
  const Eigen::Index r = returns.values.rows();
  if (initial_values.size() != n)
    throw input_error("initial value count does not match return columns");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(initial_values[i]) || initial_values[i] <= 0.0)
      throw input_error("initial value must be > 0");
  }
  if ((returns.values.array() <= -1.0).any())
    throw input_error("returns must be > -1 to keep prices positive");

  Eigen::MatrixXd prices(r + 1, n);
  prices.row(0) = initial_values.transpose();
  for (Eigen::Index k = 0; k < r; ++k)
    prices.row(k + 1) =
        prices.row(k).cwiseProduct((returns.values.row(k).array() + 1.0).matrix());

  const std::int64_t day0 = parse_iso_date(start_date);
  std::vector<std::string> dates;
  dates.reserve(static_cast<size_t>(r + 1));
  for (Eigen::Index k = 0; k <= r; ++k)
    dates.push_back(format_iso_date(day0 + static_cast<std::int64_t>(k)));
  return PriceMatrix::create(std::move(dates), returns.tickers, std::move(prices));
}

PriceMatrix generate_scenario(const PriceMatrix& history, const ScenarioSpec& spec) {
  spec.validate(history.assets());

  const ReturnsMatrix hist_returns = daily_returns(history);
  const CovarianceMatrix hist_cov = covariance(hist_returns);

  const Eigen::MatrixXd raw =
      sample_standard_normal(spec.horizon_returns, history.assets(), spec.seed);
  Eigen::MatrixXd shaped = fit_covariance_transform(raw, hist_cov);

  for (Eigen::Index i = 0; i < shaped.cols(); ++i) {
    const double bias = find_bias(shaped.col(i), spec.target_returns[i]);
    shaped.col(i).array() += bias;
  }

  ReturnsMatrix future;
  future.tickers = history.tickers;
  future.values = std::move(shaped);

  const std::string next_day =
      format_iso_date(parse_iso_date(history.dates.back()) + 1);
  return reconstruct_prices(spec.initial_values, future, next_day);
}

}  // namespace qpop
