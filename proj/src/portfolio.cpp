#include "qpop/portfolio.hpp"

#include <cmath>

#include "qpop/errors.hpp"

namespace qpop {

PortfolioMetrics portfolio_metrics(const WeightVector& weights,
                                   const Eigen::VectorXd& expected_returns,
                                   const CovarianceMatrix& cov, double budget,
                                   int annualization) {
  const Eigen::Index n = weights.weights.size();
  if (expected_returns.size() != n || cov.size() != n)
    throw input_error("weights, returns and covariance sizes disagree");
  if (!(budget > 0.0)) throw config_error("budget must be > 0");
  if (annualization < 1) throw config_error("annualization must be >= 1");
  if ((weights.weights.array() < 0.0).any())
    throw input_error("weights must be non-negative");

  const double total = weights.weights.sum();
  if (!(total > 0.0)) throw input_error("empty portfolio: total weight is zero");
  const Eigen::VectorXd omega = weights.weights / total;

  PortfolioMetrics m;
  m.expected_return = omega.dot(expected_returns);
  const double daily_var = std::max(0.0, omega.dot(cov.values * omega));
  m.risk = std::sqrt(daily_var * static_cast<double>(annualization));
  if (m.risk > 0.0) {
    m.sharpe = m.expected_return / m.risk;
    m.sharpe_defined = true;
  } else if (m.expected_return == 0.0) {
    m.sharpe = 0.0;
    m.sharpe_defined = true;
  } else {
    m.sharpe = 0.0;
    m.sharpe_defined = false;
  }
  m.budget_used = total;
  m.budget_violation = std::fabs(total - budget) / budget;
  return m;
}

FeasibilityReport feasibility_check(const WeightVector& weights, double budget,
                                    double tolerance) {
  if (!(budget > 0.0)) throw config_error("budget must be > 0");
  if (!(tolerance >= 0.0)) throw config_error("tolerance must be >= 0");
  FeasibilityReport r;
  r.budget_sum = weights.weights.sum();
  r.budget_met = std::fabs(r.budget_sum - budget) / budget <= tolerance;
  for (Eigen::Index i = 0; i < weights.weights.size(); ++i) {
    if (weights.weights[i] > 0.0) r.selected.push_back(weights.tickers[static_cast<size_t>(i)]);
    if (weights.weights[i] > budget) r.overcap.push_back(weights.tickers[static_cast<size_t>(i)]);
  }
  return r;
}

}  // namespace qpop
