#pragma once

/// @file qubo.hpp
/// @brief Binary encoding of the portfolio selection objective. Each asset
/// gets `levels` bits with weight fractions 1/2, 1/4, ..., 2^-levels of the
/// budget, so a bitstring decodes to per-asset currency weights. The energy
/// combines three terms: -alpha * return, +beta * risk, +gamma * (sum of
/// weight fractions - 1)^2 as a soft budget constraint.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpop/market_data.hpp"

namespace qpop {

using Bits = std::vector<std::uint8_t>;

std::string bits_to_string(const Bits& bits);
Bits bits_from_string(const std::string& text);

/// Maps (asset, level) pairs onto flat variable indices: v = asset*levels + level.
struct BitLayout {
  int n_assets = 0;
  int levels = 1;  ///< bits per asset, 1..8

  int n_vars() const { return n_assets * levels; }
  int var_index(int asset, int level) const { return asset * levels + level; }
  int asset_of(int var) const { return var / levels; }

  /// Fraction of budget carried by one level bit: 2^-level, so level 0 is a
  /// full-budget bit and the fractions halve from there. Exact dyadic values.
  static double level_value(int level) { return std::exp2(-level); }

  /// With all bits set one asset holds 2 - 2^(1-levels) of the budget.
  double max_weight_fraction() const { return 2.0 - std::exp2(1 - levels); }

  void validate() const;  // throws input_error
};

struct QuadraticTerm {
  int v = 0;
  int u = 0;  ///< v < u always
  double coeff = 0.0;
};

struct QuboProblem {
  int n_vars = 0;
  std::vector<double> linear;            ///< dense, size n_vars
  std::vector<QuadraticTerm> quadratic;  ///< strictly upper triangle, sorted by (v,u), nonzero
  double offset = 0.0;
  BitLayout layout;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double budget = 1.0;
};

/// Assembles the QUBO from expected returns and a covariance of daily
/// returns. Throws input_error on dimension mismatch, config_error on a
/// negative multiplier or budget <= 0.
QuboProblem build_qubo(const Eigen::VectorXd& expected_returns, const CovarianceMatrix& cov,
                       const BitLayout& layout, double alpha, double beta, double gamma,
                       double budget);

/// offset + sum linear[v]*x_v + sum coeff*x_v*x_u, evaluated in index order.
double energy(const QuboProblem& q, const Bits& bits);

/// Per-asset currency weights (fraction of budget times budget).
struct WeightVector {
  std::vector<std::string> tickers;
  Eigen::VectorXd weights;  ///< each >= 0
};

WeightVector decode_weights(const Bits& bits, const BitLayout& layout, double budget,
                            std::vector<std::string> tickers);

/// Text round-trip: a header line with the instance parameters, then one
/// `v u coeff` line per nonzero coefficient (v == u rows carry linear terms).
void dump_qubo(const QuboProblem& q, std::ostream& out);
QuboProblem load_qubo(std::istream& in);

}  // namespace qpop
