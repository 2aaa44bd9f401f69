#pragma once

/// @file solver.hpp
/// @brief QUBO solvers: exact enumeration for small instances and a
/// single-bit-flip Metropolis annealer for everything else. Both return the
/// same SampleSet shape so callers can swap backends freely.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpop/qubo.hpp"

namespace qpop {

struct SampleRecord {
  Bits bits;
  double energy = 0.0;
  long long occurrences = 0;
};

struct SampleSet {
  /// Ascending energy; ties broken by lexicographically smaller bitstring.
  std::vector<SampleRecord> records;
  std::string backend;
  std::string params;  ///< human readable parameter summary
  std::uint64_t seed = 0;
  long long total_reads = 0;
  double wall_ms = 0.0;

  const SampleRecord& best() const;  // throws numeric_error when empty
};

struct SaParams {
  int num_reads = 64;
  int sweeps = 1000;
  double beta_min = 0.0;  ///< 0 means derive both bounds from the instance
  double beta_max = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;  // throws config_error
};

/// Enumerates all 2^n states (n <= 24) with an incremental Gray-code energy
/// update, keeping the lowest distinct energies with exact re-evaluated
/// values, lexicographic minimal representative bits and degeneracy counts.
SampleSet solve_exhaustive(const QuboProblem& q);

/// Geometric beta schedule between [beta_min, beta_max]; each read runs on an
/// independent RNG stream derived from the seed, so results are identical for
/// any thread count and any read order.
SampleSet solve_sa(const QuboProblem& q, const SaParams& params);

/// One annealing read on the stream derived from (params.seed, read_index).
/// Exposed so read isolation and merge order are testable.
SampleRecord sa_single_read(const QuboProblem& q, const SaParams& params, int read_index);

/// Instance-derived schedule bounds: hottest temperature accepts a worst-case
/// single-flip uphill move with probability 1/2, coldest accepts a best-case
/// (smallest nonzero) one with probability 1/100.
std::pair<double, double> default_beta_range(const QuboProblem& q);

struct SolverConfig {
  std::string backend = "sa";
  SaParams sa;
  /// When true, sa.seed is used verbatim for every solve instead of being
  /// derived per round from a master seed.
  bool sa_seed_pinned = false;
};

/// Backend dispatch. "exhaustive" and "sa" run locally; "dwave" names the
/// remote annealer adapter that this build does not bundle (config_error);
/// anything else is an unknown backend (config_error).
SampleSet solve(const QuboProblem& q, const SolverConfig& config);

}  // namespace qpop
