#pragma once

#include <string>

#include <json.hpp>

#include "qpop/config.hpp"
#include "qpop/reduction.hpp"

namespace qpop {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Machine-readable run report. Every field except the timing block is a
/// deterministic function of inputs and config, so two reports from the same
/// run compare byte-identical once "timing" is dropped.
nlohmann::ordered_json build_report(const RunConfig& cfg, const SolveResult& result,
                                    const PriceMatrix& universe, double wall_ms);

void write_json_file(const nlohmann::ordered_json& j, const std::string& path);

}  // namespace qpop
