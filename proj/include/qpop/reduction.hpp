#pragma once

/// @file reduction.hpp
/// @brief Universe reduction and the end-to-end pipeline. A large asset
/// universe is shrunk by running several independently seeded solves and
/// keeping every asset that gets selected often enough; the final solve then
/// runs on the reduced universe only.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpop/market_data.hpp"
#include "qpop/portfolio.hpp"
#include "qpop/scenario.hpp"
#include "qpop/solver.hpp"

namespace qpop {

struct QuboConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 10.0;
  int levels = 2;
  double budget = 1.0;

  void validate() const;  // throws config_error
};

/// Outcome of one dataset solve: decoded weights plus metrics and the solver
/// telemetry needed for reporting.
struct PortfolioRun {
  WeightVector weights;
  PortfolioMetrics metrics;
  FeasibilityReport feasibility;
  Bits best_bits;
  double best_energy = 0.0;
  std::uint64_t seed = 0;
  std::string backend;
  std::string solver_params;
  double solver_wall_ms = 0.0;
};

PortfolioRun run_portfolio_solve(const PriceMatrix& data, const QuboConfig& qc,
                                 const SolverConfig& sc, std::uint64_t seed,
                                 int annualization = 252);

struct ReductionLog {
  std::vector<std::vector<std::string>> round_selections;  ///< per round, input order
  std::vector<std::string> reduced_universe;               ///< input order
  std::vector<std::string> discarded;                      ///< input order
};

/// Union-count filter over per-round selections: keep tickers selected in at
/// least min_count rounds. An empty result throws config_error (degenerate
/// multipliers select nothing in any round).
ReductionLog assemble_reduction(const std::vector<std::vector<std::string>>& round_selections,
                                const std::vector<std::string>& tickers, int min_count);

std::pair<PriceMatrix, ReductionLog> reduce_universe(const PriceMatrix& data, int rounds,
                                                     int min_count, const QuboConfig& qc,
                                                     const SolverConfig& sc,
                                                     std::uint64_t master_seed,
                                                     int annualization, int threads);

/// Reduction plus final solve on the surviving universe. Seeds: round i uses
/// mix_seed(master, i) for i = 1..rounds, the final solve mix_seed(master, 0);
/// a pinned sa seed in `sc` overrides all of them.
struct SolveResult {
  ReductionLog reduction;
  PortfolioRun final_run;
  WeightVector full_weights;  ///< over the full input universe, zeros for discarded
  std::vector<std::uint64_t> round_seeds;
  std::uint64_t final_seed = 0;
};

SolveResult solve_dataset(const PriceMatrix& data, int rounds, int min_count,
                          const QuboConfig& qc, const SolverConfig& sc,
                          std::uint64_t master_seed, int annualization, int threads);

/// Scenario generation followed by solve_dataset on the scenario.
/// The scenario uses the master seed directly.
struct PipelineResult {
  PriceMatrix scenario;
  SolveResult solve;
};

PipelineResult run_pipeline(const PriceMatrix& history, const ScenarioSpec& spec, int rounds,
                            int min_count, const QuboConfig& qc, const SolverConfig& sc,
                            int annualization, int threads);

}  // namespace qpop
