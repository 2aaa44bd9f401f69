#include "qpop/report.hpp"

#include <cstdio>
#include <fstream>

#include "qpop/errors.hpp"

namespace qpop {

namespace {

std::string pct(double fraction) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

}  // namespace

nlohmann::ordered_json build_report(const RunConfig& cfg, const SolveResult& result,
                                    const PriceMatrix& universe, double wall_ms) {
  const PortfolioRun& run = result.final_run;
  nlohmann::ordered_json j;
  j["version"] = kArtifactVersion;

  j["universe"] = {{"assets", universe.assets()},
                   {"days", universe.days()},
                   {"tickers", universe.tickers}};

  auto weights = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < result.full_weights.weights.size(); ++i) {
    nlohmann::ordered_json w;
    w["ticker"] = result.full_weights.tickers[static_cast<size_t>(i)];
    w["currency"] = result.full_weights.weights[i];
    w["fraction"] = result.full_weights.weights[i] / cfg.budget;
    weights.push_back(std::move(w));
  }
  j["weights"] = std::move(weights);

  nlohmann::ordered_json metrics;
  metrics["expected_return"] = run.metrics.expected_return;
  metrics["expected_return_pct"] = pct(run.metrics.expected_return);
  metrics["risk"] = run.metrics.risk;
  metrics["risk_pct"] = pct(run.metrics.risk);
  if (run.metrics.sharpe_defined)
    metrics["sharpe"] = run.metrics.sharpe;
  else
    metrics["sharpe"] = nullptr;
  metrics["sharpe_defined"] = run.metrics.sharpe_defined;
  metrics["budget_used"] = run.metrics.budget_used;
  metrics["budget_violation"] = run.metrics.budget_violation;
  j["metrics"] = std::move(metrics);

  j["feasibility"] = {{"budget_sum", run.feasibility.budget_sum},
                      {"budget_met", run.feasibility.budget_met},
                      {"overcap", run.feasibility.overcap},
                      {"selected", run.feasibility.selected}};

  j["reduction"] = {{"rounds", result.reduction.round_selections},
                    {"reduced_universe", result.reduction.reduced_universe},
                    {"discarded", result.reduction.discarded},
                    {"round_seeds", result.round_seeds}};

  j["solver"] = {{"backend", run.backend},
                 {"params", run.solver_params},
                 {"final_seed", result.final_seed},
                 {"best_energy", run.best_energy},
                 {"best_bits", bits_to_string(run.best_bits)}};

  j["config"] = cfg.echo();
  j["timing"] = {{"wall_ms", wall_ms}};
  return j;
}

void write_json_file(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace qpop
