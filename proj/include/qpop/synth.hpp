#pragma once

#include <cstdint>

#include "qpop/market_data.hpp"

namespace qpop {

/// Synthetic daily price history for demos and tests: per-asset drift and
/// volatility drawn from fixed ranges, one common factor for cross-asset
/// correlation, returns clamped to (-0.4, 0.4) so prices stay positive.
/// Deterministic in (n_assets, days, seed).
PriceMatrix synth_history(int n_assets, int days, std::uint64_t seed);

}  // namespace qpop
