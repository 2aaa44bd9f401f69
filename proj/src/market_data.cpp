#include "qpop/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qpop/dates.hpp"
#include "qpop/errors.hpp"

namespace qpop {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PriceMatrix PriceMatrix::create(std::vector<std::string> dates, std::vector<std::string> tickers,
                                Eigen::MatrixXd values) {
  const auto rows = static_cast<size_t>(values.rows());
  const auto cols = static_cast<size_t>(values.cols());
  if (dates.size() != rows || tickers.size() != cols)
    throw input_error("price matrix shape does not match its labels");
  if (rows < 2) throw input_error("fewer than 2 price rows");
  if (cols < 1) throw input_error("price matrix has no assets");
  std::unordered_set<std::string> seen;
  for (const auto& t : tickers) {
    if (t.empty()) throw input_error("empty ticker");
    if (!seen.insert(t).second) throw input_error("duplicate ticker: " + t);
  }
  std::int64_t prev = 0;
  for (size_t r = 0; r < rows; ++r) {
    const std::int64_t day = parse_iso_date(dates[r]);
    if (r > 0 && day <= prev)
      throw input_error("dates not strictly increasing at row " + std::to_string(r + 1));
    prev = day;
    for (size_t c = 0; c < cols; ++c) {
      const double v = values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (!std::isfinite(v) || v <= 0.0)
        throw input_error("non-positive price at row " + std::to_string(r + 1) + ", column " +
                          tickers[c]);
    }
  }
  PriceMatrix pm;
  pm.dates = std::move(dates);
  pm.tickers = std::move(tickers);
  pm.values = std::move(values);
  return pm;
}

PriceMatrix PriceMatrix::select_columns(const std::vector<int>& columns) const {
  std::vector<std::string> sub_tickers;
  Eigen::MatrixXd sub(values.rows(), static_cast<Eigen::Index>(columns.size()));
  for (size_t k = 0; k < columns.size(); ++k) {
    const int c = columns[k];
    if (c < 0 || c >= assets()) throw input_error("column index out of range");
    sub_tickers.push_back(tickers[static_cast<size_t>(c)]);
    sub.col(static_cast<Eigen::Index>(k)) = values.col(c);
  }
  return PriceMatrix::create(dates, std::move(sub_tickers), std::move(sub));
}

int PriceMatrix::column_of(const std::string& ticker) const {
  for (size_t c = 0; c < tickers.size(); ++c) {
    if (tickers[c] == ticker) return static_cast<int>(c);
  }
  return -1;
}

CovarianceMatrix CovarianceMatrix::create(std::vector<std::string> tickers,
                                          Eigen::MatrixXd values) {
  if (values.rows() != values.cols() ||
      static_cast<size_t>(values.rows()) != tickers.size())
    throw input_error("covariance shape does not match its tickers");
  const double asym = (values - values.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) throw numeric_error("covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(values, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-10)
    throw numeric_error("covariance not positive semidefinite");
  CovarianceMatrix cov;
  cov.tickers = std::move(tickers);
  cov.values = std::move(values);
  return cov;
}

PriceMatrix load_prices_csv(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw input_error("empty price CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Strip a UTF-8 BOM if an exporter left one.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "date")
    throw input_error("first column header must be 'date'");
  std::vector<std::string> tickers(header.begin() + 1, header.end());
  if (tickers.empty()) throw input_error("price CSV has no asset columns");
  std::unordered_set<std::string> seen;
  for (size_t c = 0; c < tickers.size(); ++c) {
    if (tickers[c].empty())
      throw input_error("empty ticker at column " + std::to_string(c + 2));
    if (!seen.insert(tickers[c]).second)
      throw input_error("duplicate ticker at column " + std::to_string(c + 2) + ": " + tickers[c]);
  }

  struct Row {
    std::int64_t day;
    std::string date;
    std::vector<double> cells;
    size_t file_row;  // 1-based over data rows
  };
  std::vector<Row> rows;
  size_t file_row = 0;
  while (std::getline(source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++file_row;
    auto fields = split_csv_line(line);
    if (fields.size() > tickers.size() + 1)
      throw input_error("unexpected extra field at row " + std::to_string(file_row));
    Row row;
    row.file_row = file_row;
    try {
      row.day = parse_iso_date(fields[0]);
    } catch (const input_error&) {
      throw input_error("invalid date at row " + std::to_string(file_row) + ": '" + fields[0] +
                        "'");
    }
    row.date = fields[0];
    for (size_t c = 0; c < tickers.size(); ++c) {
      if (c + 1 >= fields.size() || fields[c + 1].empty())
        throw input_error("missing cell at row " + std::to_string(file_row) + ", column " +
                          tickers[c]);
      double v = 0.0;
      if (!parse_double(fields[c + 1], v))
        throw input_error("non-numeric price at row " + std::to_string(file_row) + ", column " +
                          tickers[c]);
      if (v <= 0.0)
        throw input_error("non-positive price at row " + std::to_string(file_row) + ", column " +
                          tickers[c]);
      row.cells.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw input_error("fewer than 2 price rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.day < b.day; });
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].day == rows[r - 1].day)
      throw input_error("duplicate date at row " + std::to_string(rows[r].file_row) + ": " +
                        rows[r].date);
  }

  std::vector<std::string> dates;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(tickers.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    dates.push_back(rows[r].date);
    for (size_t c = 0; c < tickers.size(); ++c)
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r].cells[c];
  }
  return PriceMatrix::create(std::move(dates), std::move(tickers), std::move(values));
}

PriceMatrix load_prices_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open price CSV: " + path);
  return load_prices_csv(in);
}

void write_prices_csv(const PriceMatrix& prices, std::ostream& out) {
  out << "date";
  for (const auto& t : prices.tickers) out << ',' << t;
  out << '\n';
  for (int r = 0; r < prices.days(); ++r) {
    out << prices.dates[static_cast<size_t>(r)];
    for (int c = 0; c < prices.assets(); ++c) out << ',' << fmt_g17(prices.values(r, c));
    out << '\n';
  }
}

ReturnsMatrix daily_returns(const PriceMatrix& prices) {
  const int rows = prices.days() - 1;
  ReturnsMatrix rm;
  rm.tickers = prices.tickers;
  rm.values.resize(rows, prices.assets());
  for (int r = 0; r < rows; ++r)
    rm.values.row(r) =
        prices.values.row(r + 1).cwiseQuotient(prices.values.row(r)).array() - 1.0;
  return rm;
}

CovarianceMatrix covariance(const ReturnsMatrix& returns) {
  const Eigen::Index n = returns.values.rows();
  if (n < 2) throw input_error("covariance requires at least 2 return rows");
  const Eigen::MatrixXd centered =
      returns.values.rowwise() - returns.values.colwise().mean();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return CovarianceMatrix::create(returns.tickers, std::move(cov));
}

Eigen::VectorXd compounded_returns(const PriceMatrix& prices) {
  const Eigen::Index last = prices.values.rows() - 1;
  return (prices.values.row(last).cwiseQuotient(prices.values.row(0)).array() - 1.0)
      .matrix()
      .transpose();
}

}  // namespace qpop
