#pragma once

#include <filesystem>
#include <vector>

namespace gpcbo {

/// Renders SVG figures next to the CSV files of previously written runs.
/// Every repeat directory gets cost.svg (and error_norms.svg when the run
/// tracked an exact solution), then per problem family:
///   1D    solution.svg          consensus vs exact over x
///   2D    abs_diff.svg,         |consensus - exact| and consensus - exact
///         signed_diff.svg       heatmaps; one color range is shared across
///                               every directory of the invocation
///   herd  control.svg,          control components over time and eight
///         snapshots.svg         flock frames with the destination marked
///
/// A run directory is either a directory of repNNN subdirectories or a
/// single repeat directory itself. Missing inputs raise IoError naming the
/// file.
void emit_plots(const std::vector<std::filesystem::path>& run_dirs);

}  // namespace gpcbo
