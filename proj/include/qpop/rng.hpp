#pragma once

#include <cstdint>

namespace qpop {

// One SplitMix64 scramble of master + (index+1) * golden ratio increment.
// Used to derive independent child seeds (scenario, rounds, reads) from one
// master seed without correlated streams.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Maps a raw 64-bit draw to a double in the open interval (0,1).
// Uses the top 53 bits; never returns exactly 0 or 1.
double uniform_open(std::uint64_t word);

// Inverse standard normal CDF, Wichura's algorithm AS 241 (double precision
// branch). Deterministic across platforms, unlike std::normal_distribution.
double inverse_normal_cdf(double p);

}  // namespace qpop
