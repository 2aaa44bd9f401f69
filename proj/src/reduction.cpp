#include "qpop/reduction.hpp"

#include <unordered_map>

#include "qpop/errors.hpp"
#include "qpop/parallel.hpp"
#include "qpop/rng.hpp"

namespace qpop {

void QuboConfig::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw config_error("multipliers must be >= 0");
  if (!(budget > 0.0)) throw config_error("budget must be > 0");
  if (levels < 1 || levels > 8) throw config_error("levels must be in [1, 8]");
}

PortfolioRun run_portfolio_solve(const PriceMatrix& data, const QuboConfig& qc,
                                 const SolverConfig& sc, std::uint64_t seed,
                                 int annualization) {
  qc.validate();
  const Eigen::VectorXd er = compounded_returns(data);
  const CovarianceMatrix cov = covariance(daily_returns(data));
  const BitLayout layout{data.assets(), qc.levels};
  const QuboProblem q =
      build_qubo(er, cov, layout, qc.alpha, qc.beta, qc.gamma, qc.budget);

  SolverConfig run_sc = sc;
  run_sc.sa.seed = seed;
  const SampleSet samples = solve(q, run_sc);
  const SampleRecord& top = samples.best();

  PortfolioRun run;
  run.weights = decode_weights(top.bits, layout, qc.budget, data.tickers);
  run.metrics = portfolio_metrics(run.weights, er, cov, qc.budget, annualization);
  run.feasibility = feasibility_check(run.weights, qc.budget);
  run.best_bits = top.bits;
  run.best_energy = top.energy;
  run.seed = seed;
  run.backend = samples.backend;
  run.solver_params = samples.params;
  run.solver_wall_ms = samples.wall_ms;
  return run;
}

ReductionLog assemble_reduction(const std::vector<std::vector<std::string>>& round_selections,
                                const std::vector<std::string>& tickers, int min_count) {
  if (min_count < 1) throw config_error("aur.min_count must be >= 1");
  std::unordered_map<std::string, int> counts;
  for (const auto& round : round_selections)
    for (const auto& t : round) counts[t] += 1;

  ReductionLog log;
  log.round_selections = round_selections;
  for (const auto& t : tickers) {
    const auto it = counts.find(t);
    if (it != counts.end() && it->second >= min_count)
      log.reduced_universe.push_back(t);
    else
      log.discarded.push_back(t);
  }
  if (log.reduced_universe.empty())
    throw config_error(
        "universe reduction selected no assets in any round; the multiplier "
        "configuration is degenerate");
  return log;
}

std::pair<PriceMatrix, ReductionLog> reduce_universe(const PriceMatrix& data, int rounds,
                                                     int min_count, const QuboConfig& qc,
                                                     const SolverConfig& sc,
                                                     std::uint64_t master_seed,
                                                     int annualization, int threads) {
  if (rounds < 1 || rounds > 100) throw config_error("aur.rounds must be in [1, 100]");
  (void)annualization;
  qc.validate();

  // Rounds share one instance and differ only in the solver seed. A round may
  // legitimately select nothing; only the union across rounds must be non-empty.
  const Eigen::VectorXd er = compounded_returns(data);
  const CovarianceMatrix cov = covariance(daily_returns(data));
  const BitLayout layout{data.assets(), qc.levels};
  const QuboProblem q =
      build_qubo(er, cov, layout, qc.alpha, qc.beta, qc.gamma, qc.budget);

  std::vector<std::vector<std::string>> selections(static_cast<size_t>(rounds));
  parallel_indexed(rounds, threads, [&](int i) {
    SolverConfig run_sc = sc;
    run_sc.sa.seed = sc.sa_seed_pinned
                         ? sc.sa.seed
                         : mix_seed(master_seed, static_cast<std::uint64_t>(i + 1));
    const WeightVector w =
        decode_weights(solve(q, run_sc).best().bits, layout, qc.budget, data.tickers);
    selections[static_cast<size_t>(i)] = feasibility_check(w, qc.budget).selected;
  });

  ReductionLog log = assemble_reduction(selections, data.tickers, min_count);
  std::vector<int> keep;
  keep.reserve(log.reduced_universe.size());
  for (const auto& t : log.reduced_universe) keep.push_back(data.column_of(t));
  return {data.select_columns(keep), std::move(log)};
}

SolveResult solve_dataset(const PriceMatrix& data, int rounds, int min_count,
                          const QuboConfig& qc, const SolverConfig& sc,
                          std::uint64_t master_seed, int annualization, int threads) {
  SolveResult result;
  auto [reduced, log] =
      reduce_universe(data, rounds, min_count, qc, sc, master_seed, annualization, threads);
  result.reduction = std::move(log);

  for (int i = 1; i <= rounds; ++i)
    result.round_seeds.push_back(sc.sa_seed_pinned
                                     ? sc.sa.seed
                                     : mix_seed(master_seed, static_cast<std::uint64_t>(i)));
  result.final_seed = sc.sa_seed_pinned ? sc.sa.seed : mix_seed(master_seed, 0);
  result.final_run = run_portfolio_solve(reduced, qc, sc, result.final_seed, annualization);

  result.full_weights.tickers = data.tickers;
  result.full_weights.weights = Eigen::VectorXd::Zero(data.assets());
  for (Eigen::Index i = 0; i < result.final_run.weights.weights.size(); ++i) {
    const int col = [&] {
      for (size_t c = 0; c < data.tickers.size(); ++c)
        if (data.tickers[c] == result.final_run.weights.tickers[static_cast<size_t>(i)])
          return static_cast<int>(c);
      return -1;
    }();
    result.full_weights.weights[col] = result.final_run.weights.weights[i];
  }
  return result;
}

PipelineResult run_pipeline(const PriceMatrix& history, const ScenarioSpec& spec, int rounds,
                            int min_count, const QuboConfig& qc, const SolverConfig& sc,
                            int annualization, int threads) {
  PipelineResult out;
  out.scenario = generate_scenario(history, spec);
  out.solve = solve_dataset(out.scenario, rounds, min_count, qc, sc, spec.seed, annualization,
                            threads);
  return out;
}

}  // namespace qpop
