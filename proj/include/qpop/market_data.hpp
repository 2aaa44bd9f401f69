#pragma once

/// @file market_data.hpp
/// @brief Price ingestion and the derived statistics the optimizer consumes:
/// daily returns, sample covariance, and per-asset compounded window returns.

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace qpop {

/// Daily close prices. Rows are days in ascending date order, columns are assets.
struct PriceMatrix {
  std::vector<std::string> dates;    ///< ISO-8601, strictly increasing, one per row
  std::vector<std::string> tickers;  ///< unique, non-empty, one per column
  Eigen::MatrixXd values;            ///< strictly positive finite prices

  int days() const { return static_cast<int>(values.rows()); }
  int assets() const { return static_cast<int>(values.cols()); }

  /// Validates every invariant (>= 2 rows, dates sorted and unique, tickers
  /// unique, prices positive). Throws input_error on violation.
  static PriceMatrix create(std::vector<std::string> dates, std::vector<std::string> tickers,
                            Eigen::MatrixXd values);

  /// Same dates, subset of columns in the given order.
  PriceMatrix select_columns(const std::vector<int>& columns) const;

  int column_of(const std::string& ticker) const;  ///< -1 when absent
};

/// Simple daily returns r_k = p_{k+1}/p_k - 1; one row fewer than the source.
struct ReturnsMatrix {
  std::vector<std::string> tickers;
  Eigen::MatrixXd values;  ///< every entry finite and > -1

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

/// Sample covariance of daily returns, assets x assets.
struct CovarianceMatrix {
  std::vector<std::string> tickers;
  Eigen::MatrixXd values;

  int size() const { return static_cast<int>(values.rows()); }

  /// Enforces symmetry (max |C - C^T| <= 1e-12) and positive semidefiniteness
  /// (eigenvalues >= -1e-10). Throws numeric_error otherwise.
  static CovarianceMatrix create(std::vector<std::string> tickers, Eigen::MatrixXd values);
};

/// Parses `date,<ticker>,...` CSV. Rows may arrive in any order and are sorted
/// by date. Malformed content (bad dates, duplicate dates or tickers, missing
/// or non-numeric or non-positive cells, fewer than 2 rows) throws input_error
/// with the row/column location.
PriceMatrix load_prices_csv(std::istream& source);
PriceMatrix load_prices_csv_file(const std::string& path);

/// Writes the same CSV shape with round-trip precision (17 significant digits).
void write_prices_csv(const PriceMatrix& prices, std::ostream& out);

ReturnsMatrix daily_returns(const PriceMatrix& prices);

/// Column-mean-centered sample covariance with denominator rows-1.
/// Requires at least 2 return rows.
CovarianceMatrix covariance(const ReturnsMatrix& returns);

/// Per-asset total return over the whole window: last/first - 1.
Eigen::VectorXd compounded_returns(const PriceMatrix& prices);

}  // namespace qpop
