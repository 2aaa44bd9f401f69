#include "qpop/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <tuple>

#include "qpop/errors.hpp"
#include "qpop/parallel.hpp"
#include "qpop/rng.hpp"

namespace qpop {

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency adjacency_of(const QuboProblem& q) {
  Adjacency adj(static_cast<size_t>(q.n_vars));
  for (const auto& t : q.quadratic) {
    adj[static_cast<size_t>(t.v)].emplace_back(t.u, t.coeff);
    adj[static_cast<size_t>(t.u)].emplace_back(t.v, t.coeff);
  }
  return adj;
}

double wall_ms_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Energy delta of flipping variable v given current bits, via its local field.
double flip_delta(const QuboProblem& q, const Adjacency& adj, const Bits& x, int v) {
  double field = q.linear[static_cast<size_t>(v)];
  for (const auto& [u, c] : adj[static_cast<size_t>(v)])
    if (x[static_cast<size_t>(u)]) field += c;
  return x[static_cast<size_t>(v)] ? -field : field;
}

SampleRecord run_read(const QuboProblem& q, const Adjacency& adj,
                      const std::vector<double>& betas, std::uint64_t stream_seed) {
  const int n = q.n_vars;
  std::mt19937_64 eng(stream_seed);

  Bits x(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) x[static_cast<size_t>(v)] = static_cast<std::uint8_t>(eng() & 1u);

  // Local fields h[v] = dE of setting bit v with the rest of the state fixed.
  std::vector<double> h(q.linear);
  for (const auto& t : q.quadratic) {
    if (x[static_cast<size_t>(t.u)]) h[static_cast<size_t>(t.v)] += t.coeff;
    if (x[static_cast<size_t>(t.v)]) h[static_cast<size_t>(t.u)] += t.coeff;
  }

  double e = energy(q, x);
  Bits best = x;
  double best_e = e;

  for (double beta : betas) {
    for (int v = 0; v < n; ++v) {
      const double de = x[static_cast<size_t>(v)] ? -h[static_cast<size_t>(v)]
                                                  : h[static_cast<size_t>(v)];
      if (de > 0.0 && uniform_open(eng()) >= std::exp(-beta * de)) continue;
      x[static_cast<size_t>(v)] ^= 1u;
      const double sign = x[static_cast<size_t>(v)] ? 1.0 : -1.0;
      for (const auto& [u, c] : adj[static_cast<size_t>(v)])
        h[static_cast<size_t>(u)] += sign * c;
      e += de;
      if (e < best_e) {
        best_e = e;
        best = x;
      }
    }
  }
  // Incremental energies drift by rounding; store the exact value.
  return {best, energy(q, best), 1};
}

std::vector<double> beta_schedule(double beta_min, double beta_max, int sweeps) {
  std::vector<double> betas(static_cast<size_t>(sweeps));
  if (sweeps == 1) {
    betas[0] = beta_max;
    return betas;
  }
  const double ratio = beta_max / beta_min;
  for (int s = 0; s < sweeps; ++s)
    betas[static_cast<size_t>(s)] =
        beta_min * std::pow(ratio, static_cast<double>(s) / static_cast<double>(sweeps - 1));
  return betas;
}

constexpr int kExhaustiveMaxVars = 24;
constexpr size_t kTopEnergies = 16;

}  // namespace

const SampleRecord& SampleSet::best() const {
  if (records.empty()) throw numeric_error("sample set is empty");
  return records.front();
}

void SaParams::validate() const {
  if (num_reads < 1) throw config_error("sa.num_reads must be >= 1");
  if (sweeps < 1) throw config_error("sa.sweeps must be >= 1");
  if (threads < 1) throw config_error("threads must be >= 1");
  const bool auto_min = beta_min == 0.0, auto_max = beta_max == 0.0;
  if (auto_min != auto_max)
    throw config_error("sa.beta_min and sa.beta_max must be set together");
  if (!auto_min && (!(beta_min > 0.0) || !(beta_max > beta_min)))
    throw config_error("need 0 < sa.beta_min < sa.beta_max");
}

std::pair<double, double> default_beta_range(const QuboProblem& q) {
  const Adjacency adj = adjacency_of(q);
  double max_bound = 0.0;
  double min_bound = std::numeric_limits<double>::infinity();
  for (int v = 0; v < q.n_vars; ++v) {
    double bound = std::fabs(q.linear[static_cast<size_t>(v)]);
    for (const auto& [u, c] : adj[static_cast<size_t>(v)]) {
      (void)u;
      bound += std::fabs(c);
    }
    if (bound > 0.0) {
      max_bound = std::max(max_bound, bound);
      min_bound = std::min(min_bound, bound);
    }
  }
  if (max_bound == 0.0) throw numeric_error("cannot derive a beta range for an all-zero qubo");
  double beta_min = std::log(2.0) / max_bound;
  double beta_max = std::log(100.0) / min_bound;
  while (!(beta_min < beta_max)) {  // unreachable for finite bounds; kept as a guard
    beta_min *= 0.5;
    beta_max *= 2.0;
  }
  return {beta_min, beta_max};
}

SampleRecord sa_single_read(const QuboProblem& q, const SaParams& params, int read_index) {
  params.validate();
  double bmin = params.beta_min, bmax = params.beta_max;
  if (bmin == 0.0) std::tie(bmin, bmax) = default_beta_range(q);
  const Adjacency adj = adjacency_of(q);
  const auto betas = beta_schedule(bmin, bmax, params.sweeps);
  return run_read(q, adj, betas, mix_seed(params.seed, static_cast<std::uint64_t>(read_index)));
}

SampleSet solve_sa(const QuboProblem& q, const SaParams& params) {
  params.validate();
  if (q.n_vars < 1) throw input_error("qubo has no variables");
  const auto start = std::chrono::steady_clock::now();

  double bmin = params.beta_min, bmax = params.beta_max;
  if (bmin == 0.0) std::tie(bmin, bmax) = default_beta_range(q);
  const Adjacency adj = adjacency_of(q);
  const auto betas = beta_schedule(bmin, bmax, params.sweeps);

  std::vector<SampleRecord> reads(static_cast<size_t>(params.num_reads));
  parallel_indexed(params.num_reads, params.threads, [&](int r) {
    reads[static_cast<size_t>(r)] =
        run_read(q, adj, betas, mix_seed(params.seed, static_cast<std::uint64_t>(r)));
  });

  // Merge identical states; the map keying makes the result independent of
  // read completion order.
  std::map<Bits, SampleRecord> merged;
  for (auto& rec : reads) {
    auto it = merged.find(rec.bits);
    if (it == merged.end())
      merged.emplace(rec.bits, rec);
    else
      it->second.occurrences += rec.occurrences;
  }

  SampleSet out;
  out.backend = "sa";
  out.seed = params.seed;
  out.total_reads = params.num_reads;
  char buf[160];
  std::snprintf(buf, sizeof buf, "num_reads=%d sweeps=%d beta=[%.6g, %.6g]", params.num_reads,
                params.sweeps, bmin, bmax);
  out.params = buf;
  for (auto& [bits, rec] : merged) out.records.push_back(rec);
  std::sort(out.records.begin(), out.records.end(),
            [](const SampleRecord& a, const SampleRecord& b) {
              return a.energy != b.energy ? a.energy < b.energy : a.bits < b.bits;
            });
  out.wall_ms = wall_ms_since(start);
  return out;
}

SampleSet solve_exhaustive(const QuboProblem& q) {
  if (q.n_vars < 1) throw input_error("qubo has no variables");
  if (q.n_vars > kExhaustiveMaxVars)
    throw config_error("exhaustive solver supports at most " +
                       std::to_string(kExhaustiveMaxVars) + " variables, got " +
                       std::to_string(q.n_vars));
  const auto start = std::chrono::steady_clock::now();
  const Adjacency adj = adjacency_of(q);
  const int n = q.n_vars;

  // Keyed by exact energy: minimal-bitstring representative plus degeneracy.
  std::map<double, SampleRecord> top;
  const auto cutoff = [&] {
    return top.size() == kTopEnergies ? top.rbegin()->first
                                      : std::numeric_limits<double>::infinity();
  };
  const auto consider = [&](const Bits& x, double exact) {
    auto it = top.find(exact);
    if (it != top.end()) {
      it->second.occurrences += 1;
      if (x < it->second.bits) it->second.bits = x;
      return;
    }
    if (top.size() == kTopEnergies && exact >= top.rbegin()->first) return;
    top.emplace(exact, SampleRecord{x, exact, 1});
    if (top.size() > kTopEnergies) top.erase(std::prev(top.end()));
  };

  Bits x(static_cast<size_t>(n), 0);
  double running = q.offset;
  consider(x, energy(q, x));

  // Gray-code walk: state i differs from i-1 in bit ctz(i). The running
  // energy is a fast filter only; candidates are re-evaluated exactly.
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = __builtin_ctzll(i);
    running += flip_delta(q, adj, x, v);
    x[static_cast<size_t>(v)] ^= 1u;
    if (running <= cutoff() + 1e-9) {
      const double exact = energy(q, x);
      if (exact <= cutoff()) consider(x, exact);
    }
  }

  SampleSet out;
  out.backend = "exhaustive";
  out.params = "states=" + std::to_string(total);
  out.total_reads = static_cast<long long>(total);
  for (auto& [e, rec] : top) out.records.push_back(rec);
  out.wall_ms = wall_ms_since(start);
  return out;
}

SampleSet solve(const QuboProblem& q, const SolverConfig& config) {
  if (config.backend == "exhaustive") return solve_exhaustive(q);
  if (config.backend == "sa") return solve_sa(q, config.sa);
  if (config.backend == "dwave")
    throw config_error("backend not bundled: dwave (the remote annealer adapter ships separately)");
  throw config_error("unknown backend '" + config.backend + "' (available: sa, exhaustive)");
}

}  // namespace qpop
