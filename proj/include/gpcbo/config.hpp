#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "gpcbo/cbo.hpp"
#include "gpcbo/control.hpp"
#include "gpcbo/kernel.hpp"

namespace gpcbo {

enum class ProblemKind {
  Harmonic1D,
  Harmonic1DConstrained,
  Poisson2D,
  Poisson2DConstrained,
  Nonlinear2D,
  Shepherd,
  QuadraticSanity,
};

std::string problem_name(ProblemKind kind);

/// Fully resolved run description. Defaults follow the headline experiments:
/// Matern nu = 2.5, length scale 1, unit signal variance, 100 agents,
/// alpha = 1e5, lambda = 1, tau = 0.1.
struct RunConfig {
  ProblemKind problem = ProblemKind::QuadraticSanity;
  std::uint64_t seed = 1;
  int repeats = 1;
  int threads = 1;
  std::filesystem::path output;

  int points = 50;  // 1D mesh nodes
  int nx = 30;      // 2D grid
  int ny = 30;

  KernelSpec kernel;
  double sigma_gp2 = 0.0;
  bool noise_on_train = false;

  CboParams cbo;

  ShepherdParams shepherd;  // only consulted when problem == Shepherd
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<int> repeats;
  std::optional<int> threads;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ConfigError naming the offending field path.
RunConfig parse_config(const nlohmann::json& doc,
                       const CliOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const CliOverrides& overrides = {});

/// The resolved configuration (defaults filled in) as JSON. The echo is
/// itself a valid config document and reparses to the same RunConfig.
nlohmann::json config_echo(const RunConfig& config);
/// FNV-1a over the echo with the output path removed, so the hash names the
/// experiment independent of where its artifacts land.
std::string config_hash(const nlohmann::json& echo);

}  // namespace gpcbo
