#pragma once

/// @file scenario.hpp
/// @brief Forward price scenario generation. A scenario is a synthetic price
/// path whose daily-return covariance reproduces the historical covariance
/// exactly (in sample) and whose per-asset compounded return hits a caller
/// supplied target.
///
/// Construction: draw i.i.d. standard normals, re-shape them with a pair of
/// Cholesky factors so their empirical covariance equals the target, then add
/// a per-asset bias solved from sum_k ln(1 + y_k + b) = ln(1 + target).
/// The bias step shifts means only, so the covariance match survives it.

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "qpop/market_data.hpp"

namespace qpop {

struct ScenarioSpec {
  Eigen::VectorXd target_returns;  ///< compounded return per asset over the horizon, each > -1
  Eigen::VectorXd initial_values;  ///< first price row of the generated path, each > 0
  int horizon_returns = 0;         ///< number of future daily returns R; R >= max(2, N+1)
  std::uint64_t seed = 0;

  void validate(int n_assets) const;  // throws input_error
};

/// Lower-triangular factor L with L * L^T equal to the (jittered) source.
struct CholeskyFactor {
  std::vector<std::string> tickers;
  Eigen::MatrixXd values;
};

/// Plain decomposition of cov + jitter*I. Fails (numeric_error) when the
/// matrix is not positive definite at that jitter; jitter < 0 is input_error.
CholeskyFactor cholesky(const CovarianceMatrix& cov, double jitter = 0.0);

/// Decomposition with jitter escalation: tries 0, then 1e-10 * trace/N
/// through 1e-6 * trace/N in decade steps before giving up.
CholeskyFactor cholesky_auto(const CovarianceMatrix& cov);

/// rows x cols i.i.d. N(0,1) draws, filled row-major. Reproducible across
/// platforms: mt19937_64 plus a fixed inverse-CDF transform.
Eigen::MatrixXd sample_standard_normal(int rows, int cols, std::uint64_t seed);

/// Linear map of centered samples whose output's empirical covariance equals
/// `target`: Y = Xc * Lx^-T * Lh^T with Lx from cov(samples), Lh from target.
Eigen::MatrixXd fit_covariance_transform(const Eigen::MatrixXd& samples,
                                         const CovarianceMatrix& target);

/// Root b of sum_k ln(1 + y_k + b) = ln(1 + target_return), solved by
/// bracketed bisection inside the domain min(y_k) + b > -1.
double find_bias(const Eigen::VectorXd& centered_returns, double target_return);

/// Price path from initial values and a daily-returns matrix; dates are
/// consecutive calendar days starting at start_date.
PriceMatrix reconstruct_prices(const Eigen::VectorXd& initial_values, const ReturnsMatrix& returns,
                               const std::string& start_date = "2000-01-01");

/// Full generator: history supplies the covariance target, spec supplies
/// return targets, initial values, horizon and seed. The result is a valid
/// PriceMatrix dated right after the history.
PriceMatrix generate_scenario(const PriceMatrix& history, const ScenarioSpec& spec);

}  // namespace qpop
