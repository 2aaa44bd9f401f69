#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "qpop/market_data.hpp"
#include "qpop/qubo.hpp"

namespace qpop {

struct PortfolioMetrics {
  double expected_return = 0.0;  ///< compounded window return of the normalized portfolio
  double risk = 0.0;             ///< annualized volatility sqrt(w' Cov w * annualization)
  double sharpe = 0.0;           ///< expected_return / risk, zero risk-free rate
  bool sharpe_defined = false;   ///< false when risk == 0 with nonzero return
  double budget_used = 0.0;      ///< sum of currency weights
  double budget_violation = 0.0; ///< |budget_used - budget| / budget
};

/// Metrics of a decoded weight vector. Weights are normalized internally so
/// the statistics describe the held portfolio regardless of budget use.
/// Throws input_error when all weights are zero.
PortfolioMetrics portfolio_metrics(const WeightVector& weights,
                                   const Eigen::VectorXd& expected_returns,
                                   const CovarianceMatrix& cov, double budget,
                                   int annualization = 252);

struct FeasibilityReport {
  double budget_sum = 0.0;
  bool budget_met = false;              ///< relative violation within tolerance
  std::vector<std::string> overcap;     ///< tickers with weight above the budget
  std::vector<std::string> selected;    ///< tickers with weight > 0, input order
};

FeasibilityReport feasibility_check(const WeightVector& weights, double budget,
                                    double tolerance = 0.5);

}  // namespace qpop
