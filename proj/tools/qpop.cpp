// qpop: portfolio scenario generation, QUBO construction and annealing from
// the command line. Subcommands: synth, predict, qubo, solve, pipeline.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include "qpop/config.hpp"
#include "qpop/errors.hpp"
#include "qpop/market_data.hpp"
#include "qpop/qubo.hpp"
#include "qpop/reduction.hpp"
#include "qpop/report.hpp"
#include "qpop/scenario.hpp"
#include "qpop/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qpop;

double wall_ms_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct TargetRow {
  double expected_return = 0.0;
  bool has_initial = false;
  double initial = 0.0;
};

// ticker,expected_return[,initial_value]; every history ticker must appear
// exactly once. Initial values default to the last historical price row.
ScenarioSpec load_targets(const std::string& path, const PriceMatrix& history, int horizon,
                          std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open targets CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw input_error("empty targets CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("ticker,expected_return", 0) != 0)
    throw input_error("targets CSV header must start with 'ticker,expected_return'");

  std::unordered_map<std::string, TargetRow> rows;
  size_t row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++row_no;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    fields.push_back(cur);
    if (fields.size() < 2 || fields.size() > 3)
      throw input_error("targets row " + std::to_string(row_no) + " needs 2 or 3 fields");
    const std::string ticker = fields[0];
    if (history.column_of(ticker) < 0)
      throw input_error("unknown ticker in targets: " + ticker);
    if (rows.count(ticker)) throw input_error("duplicate ticker in targets: " + ticker);
    TargetRow row;
    try {
      row.expected_return = std::stod(fields[1]);
      if (fields.size() == 3 && !fields[2].empty()) {
        row.initial = std::stod(fields[2]);
        row.has_initial = true;
      }
    } catch (const std::exception&) {
      throw input_error("non-numeric value in targets row " + std::to_string(row_no));
    }
    rows.emplace(ticker, row);
  }

  ScenarioSpec spec;
  const int n = history.assets();
  spec.target_returns.resize(n);
  spec.initial_values.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::string& ticker = history.tickers[static_cast<size_t>(i)];
    const auto it = rows.find(ticker);
    if (it == rows.end()) throw input_error("no target return for ticker: " + ticker);
    spec.target_returns[i] = it->second.expected_return;
    spec.initial_values[i] = it->second.has_initial
                                 ? it->second.initial
                                 : history.values(history.days() - 1, i);
  }
  spec.horizon_returns = horizon > 0 ? horizon : history.days() - 1;
  spec.seed = seed;
  spec.validate(n);
  return spec;
}

std::string ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw input_error("cannot create output directory: " + cfg.out);
  return dir.string();
}

void write_scenario_csv(const PriceMatrix& scenario, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path.string());
  write_prices_csv(scenario, out);
}

PriceMatrix history_from(const RunConfig& cfg, const std::string& positional) {
  const std::string path = positional.empty() ? cfg.history : positional;
  if (path.empty())
    throw config_error("no input dataset: pass a CSV argument or set the history key");
  return load_prices_csv_file(path);
}

int run(int argc, char** argv) {
  CLI::App app{"QUBO portfolio optimizer"};
  app.require_subcommand(1);

  std::string config_path, cli_out, cli_solver;
  std::uint64_t cli_seed = 0;
  bool seed_given = false, out_given = false, solver_given = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", cli_seed, "master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  app.add_option("--out", cli_out, "output directory")->each([&](const std::string&) {
    out_given = true;
  });
  app.add_option("--solver", cli_solver, "backend: sa, exhaustive")
      ->each([&](const std::string&) { solver_given = true; });
  app.add_option("--set", overrides, "extra config overrides, key=value")
      ->type_size(1)
      ->allow_extra_args(false);

  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic price history CSV");
  synth_cmd->fallthrough();
  int synth_assets = 5, synth_days = 250;
  std::string synth_file;
  synth_cmd->add_option("--assets", synth_assets, "number of assets");
  synth_cmd->add_option("--days", synth_days, "number of price rows");
  synth_cmd->add_option("--file", synth_file, "output path (default <out>/synth.csv)");

  auto* predict_cmd =
      app.add_subcommand("predict", "generate a forward scenario from history and targets");
  predict_cmd->fallthrough();
  auto* qubo_cmd = app.add_subcommand("qubo", "print the QUBO for a dataset");
  qubo_cmd->fallthrough();
  std::string qubo_input;
  qubo_cmd->add_option("dataset", qubo_input, "price CSV");
  auto* solve_cmd = app.add_subcommand("solve", "reduce and solve a dataset");
  solve_cmd->fallthrough();
  std::string solve_input;
  solve_cmd->add_option("dataset", solve_input, "price CSV");
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "scenario generation, reduction and final solve");
  pipeline_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: config: " << e.what() << '\n';
    return 4;
  }

  const auto start = std::chrono::steady_clock::now();

  RunConfig cfg;
  if (!config_path.empty()) cfg = RunConfig::load_file(config_path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw config_error("--set needs key=value, got: " + kv);
    cfg.set_key(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (seed_given) cfg.seed = cli_seed;
  if (out_given) cfg.out = cli_out;
  if (solver_given) cfg.solver = cli_solver;
  cfg.validate();

  if (*synth_cmd) {
    const PriceMatrix prices = synth_history(synth_assets, synth_days, cfg.seed);
    const fs::path path =
        synth_file.empty() ? fs::path(ensure_out_dir(cfg)) / "synth.csv" : fs::path(synth_file);
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path.string());
    write_prices_csv(prices, out);
    std::cout << path.string() << '\n';
    return 0;
  }

  if (*qubo_cmd) {
    const PriceMatrix data = history_from(cfg, qubo_input);
    const Eigen::VectorXd er = compounded_returns(data);
    const CovarianceMatrix cov = covariance(daily_returns(data));
    const BitLayout layout{data.assets(), cfg.levels};
    dump_qubo(build_qubo(er, cov, layout, cfg.alpha, cfg.beta, cfg.gamma, cfg.budget),
              std::cout);
    return 0;
  }

  if (*predict_cmd) {
    if (cfg.history.empty()) throw config_error("predict needs the history config key");
    if (cfg.targets.empty()) throw config_error("predict needs the targets config key");
    const PriceMatrix history = load_prices_csv_file(cfg.history);
    const ScenarioSpec spec = load_targets(cfg.targets, history, cfg.horizon, cfg.seed);
    const PriceMatrix scenario = generate_scenario(history, spec);
    const fs::path path = fs::path(ensure_out_dir(cfg)) / "scenario.csv";
    write_scenario_csv(scenario, path);
    std::cout << path.string() << '\n';
    return 0;
  }

  if (*solve_cmd) {
    const PriceMatrix data = history_from(cfg, solve_input);
    const SolveResult result =
        solve_dataset(data, cfg.rounds, cfg.min_count, cfg.qubo_config(), cfg.solver_config(),
                      cfg.seed, cfg.annualization, cfg.threads);
    const fs::path path = fs::path(ensure_out_dir(cfg)) / "report.json";
    write_json_file(build_report(cfg, result, data, wall_ms_since(start)), path.string());
    std::cout << path.string() << '\n';
    return 0;
  }

  if (*pipeline_cmd) {
    if (cfg.history.empty()) throw config_error("pipeline needs the history config key");
    if (cfg.targets.empty()) throw config_error("pipeline needs the targets config key");
    const PriceMatrix history = load_prices_csv_file(cfg.history);
    const ScenarioSpec spec = load_targets(cfg.targets, history, cfg.horizon, cfg.seed);
    const PipelineResult result =
        run_pipeline(history, spec, cfg.rounds, cfg.min_count, cfg.qubo_config(),
                     cfg.solver_config(), cfg.annualization, cfg.threads);
    const fs::path dir(ensure_out_dir(cfg));
    write_scenario_csv(result.scenario, dir / "scenario.csv");
    const fs::path report_path = dir / "report.json";
    write_json_file(build_report(cfg, result.solve, result.scenario, wall_ms_since(start)),
                    report_path.string());
    std::cout << (dir / "scenario.csv").string() << '\n' << report_path.string() << '\n';
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const input_error& e) {
    std::cerr << "error: input: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: numeric: " << e.what() << '\n';
    return 3;
  } catch (const config_error& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
}
