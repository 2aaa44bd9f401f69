#include "qpop/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "qpop/errors.hpp"

namespace qpop {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out))
    throw config_error("config key '" + key + "' needs a number, got '" + value + "'");
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  int out = 0;
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, out);
  if (ec != std::errc() || ptr != last)
    throw config_error("config key '" + key + "' needs an integer, got '" + value + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), last, out);
  if (ec != std::errc() || ptr != last)
    throw config_error("config key '" + key + "' needs an unsigned integer, got '" + value + "'");
  return out;
}

}  // namespace

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + " is not key = value");
    cfg.set_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::set_key(const std::string& key, const std::string& value) {
  if (key == "history")
    history = value;
  else if (key == "targets")
    targets = value;
  else if (key == "out")
    out = value;
  else if (key == "alpha")
    alpha = to_double(key, value);
  else if (key == "beta")
    beta = to_double(key, value);
  else if (key == "gamma")
    gamma = to_double(key, value);
  else if (key == "levels")
    levels = to_int(key, value);
  else if (key == "budget")
    budget = to_double(key, value);
  else if (key == "horizon")
    horizon = to_int(key, value);
  else if (key == "seed")
    seed = to_u64(key, value);
  else if (key == "solver")
    solver = value;
  else if (key == "sa.num_reads")
    sa_num_reads = to_int(key, value);
  else if (key == "sa.sweeps")
    sa_sweeps = to_int(key, value);
  else if (key == "sa.beta_min")
    sa_beta_min = to_double(key, value);
  else if (key == "sa.beta_max")
    sa_beta_max = to_double(key, value);
  else if (key == "sa.seed") {
    sa_seed = to_u64(key, value);
    sa_seed_set = true;
  } else if (key == "aur.rounds")
    rounds = to_int(key, value);
  else if (key == "aur.min_count")
    min_count = to_int(key, value);
  else if (key == "annualization")
    annualization = to_int(key, value);
  else if (key == "threads")
    threads = to_int(key, value);
  else
    throw config_error("unknown config key: " + key);
}

void RunConfig::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw config_error("multipliers must be >= 0");
  if (levels < 1 || levels > 8) throw config_error("levels must be in [1, 8]");
  if (!(budget > 0.0)) throw config_error("budget must be > 0");
  if (horizon < 0) throw config_error("horizon must be >= 0");
  if (solver.empty()) throw config_error("solver must not be empty");
  if (sa_num_reads < 1) throw config_error("sa.num_reads must be >= 1");
  if (sa_sweeps < 1) throw config_error("sa.sweeps must be >= 1");
  const bool auto_min = sa_beta_min == 0.0, auto_max = sa_beta_max == 0.0;
  if (auto_min != auto_max)
    throw config_error("sa.beta_min and sa.beta_max must be set together");
  if (!auto_min && (!(sa_beta_min > 0.0) || !(sa_beta_max > sa_beta_min)))
    throw config_error("need 0 < sa.beta_min < sa.beta_max");
  if (rounds < 1 || rounds > 100) throw config_error("aur.rounds must be in [1, 100]");
  if (min_count < 1) throw config_error("aur.min_count must be >= 1");
  if (annualization < 1) throw config_error("annualization must be >= 1");
  if (threads < 1) throw config_error("threads must be >= 1");
}

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json j;
  j["history"] = history;
  j["targets"] = targets;
  j["out"] = out;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["levels"] = levels;
  j["budget"] = budget;
  j["horizon"] = horizon;
  j["seed"] = seed;
  j["solver"] = solver;
  j["sa.num_reads"] = sa_num_reads;
  j["sa.sweeps"] = sa_sweeps;
  j["sa.beta_min"] = sa_beta_min;
  j["sa.beta_max"] = sa_beta_max;
  if (sa_seed_set) j["sa.seed"] = sa_seed;
  j["aur.rounds"] = rounds;
  j["aur.min_count"] = min_count;
  j["annualization"] = annualization;
  return j;
}

QuboConfig RunConfig::qubo_config() const {
  QuboConfig qc;
  qc.alpha = alpha;
  qc.beta = beta;
  qc.gamma = gamma;
  qc.levels = levels;
  qc.budget = budget;
  return qc;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig sc;
  sc.backend = solver;
  sc.sa.num_reads = sa_num_reads;
  sc.sa.sweeps = sa_sweeps;
  sc.sa.beta_min = sa_beta_min;
  sc.sa.beta_max = sa_beta_max;
  sc.sa.threads = threads;
  sc.sa_seed_pinned = sa_seed_set;
  if (sa_seed_set) sc.sa.seed = sa_seed;
  return sc;
}

}  // namespace qpop
