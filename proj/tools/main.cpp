#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpcbo/config.hpp"
#include "gpcbo/errors.hpp"
#include "gpcbo/plot.hpp"
#include "gpcbo/runner.hpp"

namespace {

// 0 success, 2 configuration, 3 numerics, 4 I/O
constexpr int kConfigFailure = 2;
constexpr int kNumericFailure = 3;
constexpr int kIoFailure = 4;

int run_command(const std::string& config_path,
                const gpcbo::CliOverrides& overrides) {
  const gpcbo::RunConfig config = gpcbo::load_config(config_path, overrides);
  const nlohmann::json summary = gpcbo::run_experiment(config);
  std::printf("%s\n", summary.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP-consensus optimization of discretized functionals"};
  app.require_subcommand(1);

  std::string config_path;
  gpcbo::CliOverrides overrides;
  std::uint64_t seed = 0;
  std::string out;
  int repeats = 0;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "JSON experiment description")
      ->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "base seed");
  CLI::Option* out_opt = run->add_option("--out", out, "output directory");
  CLI::Option* repeats_opt =
      run->add_option("--repeats", repeats, "number of repeats");
  CLI::Option* threads_opt =
      run->add_option("--threads", threads, "worker threads");

  std::vector<std::string> plot_dirs;
  CLI::App* plot = app.add_subcommand("plot", "render figures for run output");
  plot->add_option("dirs", plot_dirs, "run directories")
      ->required()
      ->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigFailure;
  }

  try {
    if (run->parsed()) {
      if (*seed_opt) overrides.seed = seed;
      if (*out_opt) overrides.output = out;
      if (*repeats_opt) overrides.repeats = repeats;
      if (*threads_opt) overrides.threads = threads;
      return run_command(config_path, overrides);
    }
    std::vector<std::filesystem::path> dirs(plot_dirs.begin(),
                                            plot_dirs.end());
    gpcbo::emit_plots(dirs);
    return 0;
  } catch (const gpcbo::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigFailure;
  } catch (const gpcbo::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoFailure;
  } catch (const gpcbo::ConditioningError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericFailure;
  }
}
