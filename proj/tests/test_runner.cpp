#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "gpcbo/csv.hpp"
#include "gpcbo/errors.hpp"
#include "gpcbo/runner.hpp"

using namespace gpcbo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gpcbo_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig tiny_sanity(const fs::path& out) {
  RunConfig c;
  c.problem = ProblemKind::QuadraticSanity;
  c.points = 17;
  c.output = out;
  c.cbo.num_agents = 8;
  c.cbo.horizon = 1.0;  // 10 iterations
  c.kernel.length_scale = 0.5;
  return c;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GPCBO_CLI_BIN) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("an experiment writes the full artifact set") {
  const fs::path out = fresh_dir("runner_basic");
  RunConfig c = tiny_sanity(out);
  c.repeats = 2;
  c.seed = 11;
  const json summary = run_experiment(c);

  CHECK(summary.at("problem") == "quadratic_sanity");
  CHECK(summary.at("repeats") == 2);
  REQUIRE(summary.at("final_costs").size() == 2);
  REQUIRE(summary.at("seeds").size() == 2);
  CHECK(summary.at("seeds")[0] == 11);
  CHECK(summary.at("seeds")[1] == 12);
  CHECK(summary.at("initial_median_costs").size() == 2);
  CHECK(summary.at("initial_best_costs").size() == 2);
  CHECK(summary.at("final_err_l2").size() == 2);
  // optimization actually progressed
  CHECK(summary.at("final_costs")[0].get<double>() <
        summary.at("initial_median_costs")[0].get<double>());

  CHECK(fs::exists(out / "summary.json"));
  const json on_disk = read_json(out / "summary.json");
  CHECK(on_disk == summary);

  const json echo = read_json(out / "config_echo.json");
  CHECK(echo.at("derived").at("iterations") == 10);
  CHECK(echo.at("config_hash") == summary.at("config_hash"));

  for (const char* rep : {"rep000", "rep001"}) {
    const CsvTable history = read_csv(out / rep / "history.csv");
    CHECK(history.rows.size() == 11);  // iterations 0..10
    CHECK(history.number(0, history.column("iteration")) == 0.0);
    CHECK(history.number(10, history.column("iteration")) == 10.0);
    CHECK(std::isfinite(history.number(10, history.column("err_l2"))));

    const CsvTable solution = read_csv(out / rep / "solution.csv");
    CHECK(solution.rows.size() == 17);
    CHECK(solution.column("value") == 1);
    CHECK(solution.column("exact") == 2);
  }

  // the history tail agrees with the summary
  const CsvTable history = read_csv(out / "rep000" / "history.csv");
  CHECK(history.number(10, history.column("consensus_cost")) ==
        doctest::Approx(summary.at("final_costs")[0].get<double>())
            .epsilon(1e-15));
}

TEST_CASE("identical configurations reproduce identical artifacts") {
  const fs::path out_a = fresh_dir("runner_det_a");
  const fs::path out_b = fresh_dir("runner_det_b");
  RunConfig a = tiny_sanity(out_a);
  RunConfig b = tiny_sanity(out_b);
  const json summary_a = run_experiment(a);
  const json summary_b = run_experiment(b);
  // summaries carry no wall-clock data at all
  CHECK(summary_a == summary_b);

  const CsvTable ha = read_csv(out_a / "rep000" / "history.csv");
  const CsvTable hb = read_csv(out_b / "rep000" / "history.csv");
  REQUIRE(ha.rows.size() == hb.rows.size());
  const std::size_t seconds = ha.column("seconds");
  for (std::size_t r = 0; r < ha.rows.size(); ++r)
    for (std::size_t col = 0; col < ha.header.size(); ++col)
      if (col != seconds) CHECK(ha.rows[r][col] == hb.rows[r][col]);

  std::ifstream sa(out_a / "rep000" / "solution.csv");
  std::ifstream sb(out_b / "rep000" / "solution.csv");
  const std::string text_a((std::istreambuf_iterator<char>(sa)),
                           std::istreambuf_iterator<char>());
  const std::string text_b((std::istreambuf_iterator<char>(sb)),
                           std::istreambuf_iterator<char>());
  CHECK(text_a == text_b);
}

TEST_CASE("constrained problems record their prescribed points") {
  const fs::path out = fresh_dir("runner_constrained");
  RunConfig c;
  c.problem = ProblemKind::Harmonic1DConstrained;
  c.points = 20;
  c.output = out;
  c.cbo.num_agents = 8;
  c.cbo.horizon = 1.0;
  const json summary = run_experiment(c);

  REQUIRE(summary.contains("constraint_residuals"));
  CHECK(summary.at("constraint_residuals").size() == 1);
  CHECK(summary.at("constraint_residuals")[0].get<double>() < 0.05);

  const CsvTable constraints = read_csv(out / "rep000" / "constraints.csv");
  REQUIRE(constraints.rows.size() == 2);
  CHECK(constraints.number(0, constraints.column("prescribed")) == 1.85673);
  const json echo = read_json(out / "config_echo.json");
  CHECK(echo.at("derived").at("probe_slots") == 2);
}

TEST_CASE("the herding problem writes control and trajectory files") {
  const fs::path out = fresh_dir("runner_herd");
  RunConfig c;
  c.problem = ProblemKind::Shepherd;
  c.output = out;
  c.kernel.smoothness = 0.5;
  c.cbo.num_agents = 6;
  c.cbo.horizon = 0.5;  // 5 iterations
  c.shepherd.num_sheep = 4;
  c.shepherd.steps = 12;
  c.shepherd.horizon = 1.5;
  const json summary = run_experiment(c);

  REQUIRE(summary.contains("zero_control_cost"));
  CHECK(summary.at("zero_control_cost").get<double>() > 0.0);

  const CsvTable control = read_csv(out / "rep000" / "solution.csv");
  CHECK(control.rows.size() == 13);
  CHECK(control.header.size() == 3);  // t, u0_x, u0_y
  const CsvTable traj = read_csv(out / "rep000" / "trajectory.csv");
  CHECK(traj.rows.size() == 13);
  CHECK(traj.column("sheep3_y") == traj.header.size() - 1);
  CHECK(traj.number(12, traj.column("t")) == doctest::Approx(1.5));
  // history has no exact reference, so the error cells are blank
  const CsvTable history = read_csv(out / "rep000" / "history.csv");
  CHECK(std::isnan(history.number(0, history.column("err_l2"))));
}

TEST_CASE("two dog scenario doubles the control channels") {
  const fs::path out = fresh_dir("runner_two_dogs");
  RunConfig c;
  c.problem = ProblemKind::Shepherd;
  c.output = out;
  c.kernel.smoothness = 0.5;
  c.cbo.num_agents = 4;
  c.cbo.horizon = 0.3;
  c.shepherd.num_sheep = 3;
  c.shepherd.num_dogs = 2;
  c.shepherd.dog_start = {Eigen::Vector2d(-6.0, 1.0),
                          Eigen::Vector2d(-6.0, -1.0)};
  c.shepherd.steps = 10;
  c.shepherd.horizon = 1.0;
  run_experiment(c);
  const CsvTable control = read_csv(out / "rep000" / "solution.csv");
  CHECK(control.header.size() == 5);  // t + two xy channels
  const json echo = read_json(out / "config_echo.json");
  CHECK(echo.at("derived").at("components") == 4);
}

TEST_CASE("cli runs a config end to end") {
  const fs::path dir = fresh_dir("cli_ok");
  const fs::path out = dir / "run";
  json doc{{"problem", "quadratic_sanity"},
           {"output", out.string()},
           {"mesh", {{"points", 15}}},
           {"cbo", {{"agents", 6}, {"horizon", 0.5}}}};
  write_file(dir / "config.json", doc.dump());
  CHECK(run_cli("run --config " + (dir / "config.json").string()) == 0);
  CHECK(fs::exists(out / "summary.json"));

  // overrides change seed and destination
  const fs::path out2 = dir / "run2";
  CHECK(run_cli("run --config " + (dir / "config.json").string() +
                " --seed 9 --out " + out2.string()) == 0);
  const json echo = read_json(out2 / "config_echo.json");
  CHECK(echo.at("seed") == 9);
}

TEST_CASE("cli maps error families to exit codes") {
  const fs::path dir = fresh_dir("cli_errors");

  // 2: unreadable or invalid configuration
  CHECK(run_cli("run --config /nonexistent.json") == 2);
  write_file(dir / "bad_key.json",
             R"({"problem": "quadratic_sanity", "output": "o", "bogus": 1})");
  CHECK(run_cli("run --config " + (dir / "bad_key.json").string()) == 2);
  write_file(dir / "not_json.json", "{problem:");
  CHECK(run_cli("run --config " + (dir / "not_json.json").string()) == 2);
  CHECK(run_cli("run") == 2);  // missing required --config

  // 4: output location cannot be created
  write_file(dir / "bad_out.json",
             R"({"problem": "quadratic_sanity", "mesh": {"points": 15},
                 "cbo": {"agents": 6, "horizon": 0.5},
                 "output": "/proc/version/cannot_exist"})");
  CHECK(run_cli("run --config " + (dir / "bad_out.json").string()) == 4);

  // 3: every agent cost is infinite, the optimizer cannot proceed
  json doomed{{"problem", "shepherd"},
              {"output", (dir / "doomed_out").string()},
              {"kernel", {{"family", "matern"}, {"nu", 0.5}}},
              {"cbo", {{"agents", 2}, {"horizon", 0.2}}},
              {"shepherd",
               {{"sheep", 3},
                {"steps", 4},
                {"horizon", 0.5},
                {"weight_com", 1e308}}}};
  write_file(dir / "doomed.json", doomed.dump());
  CHECK(run_cli("run --config " + (dir / "doomed.json").string()) == 3);
}
