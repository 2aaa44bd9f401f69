#pragma once

// Shared fixtures for the test suite. The energy oracle here deliberately
// re-derives the objective from raw returns/covariance instead of calling the
// production expansion, so the two can disagree when one of them is wrong.

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "qpop/dates.hpp"
#include "qpop/market_data.hpp"
#include "qpop/qubo.hpp"

namespace testutil {

inline qpop::PriceMatrix make_prices(std::vector<std::string> tickers,
                                     const std::vector<std::vector<double>>& rows,
                                     const std::string& start_date = "2021-03-01") {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(tickers.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  const std::int64_t day0 = qpop::parse_iso_date(start_date);
  std::vector<std::string> dates;
  for (size_t r = 0; r < rows.size(); ++r)
    dates.push_back(qpop::format_iso_date(day0 + static_cast<std::int64_t>(r)));
  return qpop::PriceMatrix::create(std::move(dates), std::move(tickers), std::move(values));
}

struct RandomInstance {
  Eigen::VectorXd er;
  qpop::CovarianceMatrix cov;
  qpop::BitLayout layout;
  double alpha = 1.0, beta = 1.0, gamma = 10.0;
};

inline RandomInstance random_instance(std::mt19937_64& eng, int n_assets, int levels) {
  std::uniform_real_distribution<double> er_dist(-0.3, 0.5);
  std::uniform_real_distribution<double> a_dist(-0.15, 0.15);
  std::uniform_real_distribution<double> ab_dist(0.5, 2.0);
  std::uniform_real_distribution<double> g_dist(5.0, 15.0);

  RandomInstance inst;
  inst.er.resize(n_assets);
  for (int i = 0; i < n_assets; ++i) inst.er[i] = er_dist(eng);

  Eigen::MatrixXd a(n_assets, n_assets);
  for (int i = 0; i < n_assets; ++i)
    for (int j = 0; j < n_assets; ++j) a(i, j) = a_dist(eng);
  Eigen::MatrixXd c = (a.transpose() * a) / static_cast<double>(n_assets);
  c = ((c + c.transpose()) * 0.5).eval();
  std::vector<std::string> tickers;
  for (int i = 0; i < n_assets; ++i) tickers.push_back("T" + std::to_string(i));
  inst.cov = qpop::CovarianceMatrix::create(std::move(tickers), std::move(c));

  inst.layout = qpop::BitLayout{n_assets, levels};
  inst.alpha = ab_dist(eng);
  inst.beta = ab_dist(eng);
  inst.gamma = g_dist(eng);
  return inst;
}

// Lex-ordered bit pattern for state index: bit v is character v of the string,
// so counting i upward walks bitstrings in lexicographic order.
inline qpop::Bits state_bits(std::uint64_t i, int n_vars) {
  qpop::Bits bits(static_cast<size_t>(n_vars));
  for (int v = 0; v < n_vars; ++v)
    bits[static_cast<size_t>(v)] =
        static_cast<std::uint8_t>((i >> (n_vars - 1 - v)) & 1u);
  return bits;
}

// Direct three-term objective: -alpha * return + beta * risk + gamma * budget
// penalty, computed from decoded budget fractions with plain loops.
inline double direct_energy(const RandomInstance& inst, const qpop::Bits& bits) {
  const int n = inst.layout.n_assets;
  const int p = inst.layout.levels;
  std::vector<double> omega(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < p; ++d)
      if (bits[static_cast<size_t>(i * p + d)])
        omega[static_cast<size_t>(i)] += std::exp2(-d);

  double ret = 0.0, risk = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    ret += inst.er[i] * omega[static_cast<size_t>(i)];
    total += omega[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j)
      risk += inst.cov.values(i, j) * omega[static_cast<size_t>(i)] * omega[static_cast<size_t>(j)];
  }
  return -inst.alpha * ret + inst.beta * risk + inst.gamma * (total - 1.0) * (total - 1.0);
}

struct BruteResult {
  qpop::Bits bits;
  double energy = 0.0;
};

// Full enumeration with the direct objective; first hit in lex order wins ties.
inline BruteResult brute_force_min(const RandomInstance& inst) {
  const int nv = inst.layout.n_vars();
  BruteResult best;
  best.energy = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < (1ULL << nv); ++i) {
    const qpop::Bits bits = state_bits(i, nv);
    const double e = direct_energy(inst, bits);
    if (e < best.energy) {
      best.energy = e;
      best.bits = bits;
    }
  }
  return best;
}

}  // namespace testutil
