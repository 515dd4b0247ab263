#pragma once

#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fconc/harness.hpp"

namespace fconc::detail {

/// Fills metrics, witnesses and verdict of `rep` from a merged config.
using ExperimentFn = void (*)(const nlohmann::json& cfg, std::uint64_t seed, ExperimentReport& rep);

ExperimentFn find_experiment(std::string_view id);

}  // namespace fconc::detail
