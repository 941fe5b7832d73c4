#pragma once

#include <json.hpp>

#include "gpcbo/config.hpp"

namespace gpcbo {

/// Runs the configured experiment (all repeats) and writes every artifact
/// under config.output:
///
///   config_echo.json   resolved configuration, derived quantities, hash
///   summary.json       cross-repeat results (returned as well)
///   repNNN/history.csv one row per recorded iteration
///   repNNN/solution.csv  final consensus: node values, or control nodes
///   repNNN/constraints.csv  prescribed interior points vs consensus values
///   repNNN/trajectory.csv   herding only: flock simulated under the
///                           consensus control
///
/// Repeat r uses seed config.seed + r. Everything written is reproducible
/// byte for byte except the history "seconds" column.
nlohmann::json run_experiment(const RunConfig& config);

}  // namespace gpcbo
