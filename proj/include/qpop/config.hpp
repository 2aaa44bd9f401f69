#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qpop/reduction.hpp"
#include "qpop/solver.hpp"

namespace qpop {

/// Flat key=value run configuration. Defaults are usable as-is except for the
/// input paths. Unknown keys and out-of-range values raise config_error.
struct RunConfig {
  std::string history;       ///< price CSV path
  std::string targets;       ///< targets CSV path (ticker,expected_return[,initial_value])
  std::string out = ".";     ///< output directory
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 10.0;
  int levels = 2;            ///< proportion bits per asset
  double budget = 1.0;
  int horizon = 0;           ///< scenario returns; 0 mirrors the history (days - 1)
  std::uint64_t seed = 0;    ///< master seed
  std::string solver = "sa";
  int sa_num_reads = 64;
  int sa_sweeps = 1000;
  double sa_beta_min = 0.0;  ///< 0 = derive from the instance (with sa_beta_max)
  double sa_beta_max = 0.0;
  bool sa_seed_set = false;  ///< sa.seed pins every solve when present
  std::uint64_t sa_seed = 0;
  int rounds = 5;            ///< reduction rounds
  int min_count = 1;         ///< rounds an asset must be selected in to survive
  int annualization = 252;
  int threads = 1;           ///< execution detail; never changes results

  static RunConfig load_file(const std::string& path);
  void set_key(const std::string& key, const std::string& value);
  void validate() const;

  /// Semantic keys only (no threads), fixed order; feeding this back as a
  /// config reproduces the run.
  nlohmann::ordered_json echo() const;

  QuboConfig qubo_config() const;
  SolverConfig solver_config() const;
};

}  // namespace qpop
