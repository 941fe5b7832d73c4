#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gpcbo/config.hpp"
#include "gpcbo/errors.hpp"

using namespace gpcbo;
using nlohmann::json;

namespace {

json minimal() {
  return json{{"problem", "quadratic_sanity"}, {"output", "out/x"}};
}

}  // namespace

TEST_CASE("minimal document fills in the defaults") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.problem == ProblemKind::QuadraticSanity);
  CHECK(c.seed == 1);
  CHECK(c.repeats == 1);
  CHECK(c.threads == 1);
  CHECK(c.points == 50);
  CHECK(c.kernel.family == KernelFamily::MaternHalfInteger);
  CHECK(c.kernel.smoothness == 2.5);
  CHECK(c.kernel.length_scale == 1.0);
  CHECK(c.sigma_gp2 == 0.0);
  CHECK_FALSE(c.noise_on_train);
  CHECK(c.cbo.num_agents == 100);
  CHECK(c.cbo.alpha == 1e5);
  CHECK(c.cbo.lambda == 1.0);
  CHECK(c.cbo.tau == 0.1);
  CHECK(c.cbo.horizon == 200.0);
  CHECK(c.cbo.norm == NormKind::L2);
}

TEST_CASE("unknown keys are rejected with their path") {
  json doc = minimal();
  doc["bogus"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("bogus"),
                       ConfigError);

  doc = minimal();
  doc["cbo"] = {{"agents", 10}, {"bogus", 1}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("cbo.bogus"),
                       ConfigError);
}

TEST_CASE("field types are checked") {
  json doc = minimal();
  doc["cbo"] = {{"alpha", "high"}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("cbo.alpha"),
                       ConfigError);
  doc = minimal();
  doc["mesh"] = {{"points", 10.5}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("integer"),
                       ConfigError);
  doc = minimal();
  doc["seed"] = -4;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("problem names must be known") {
  json doc = minimal();
  doc["problem"] = "heat_equation";
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("heat_equation"),
                       ConfigError);
  doc.erase("problem");
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("problem"),
                       ConfigError);
}

TEST_CASE("kernel block") {
  json doc = minimal();
  doc["kernel"] = {{"family", "matern"}, {"nu", 2.0}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("smoothness"),
                       ConfigError);

  doc["kernel"] = {{"family", "squared_exponential"}, {"nu", 1.5}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("kernel.nu"),
                       ConfigError);

  doc["kernel"] = {{"family", "brownian"}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("kernel.family"),
                       ConfigError);

  doc["kernel"] = {{"family", "matern"}, {"nu", 0.5}, {"length_scale", 2.0}};
  const RunConfig c = parse_config(doc);
  CHECK(c.kernel.smoothness == 0.5);
  CHECK(c.kernel.length_scale == 2.0);
}

TEST_CASE("mesh keys depend on the problem family") {
  json doc = minimal();  // quadratic_sanity is 1D
  doc["mesh"] = {{"nx", 10}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("mesh.nx"),
                       ConfigError);

  doc = json{{"problem", "poisson2d"}, {"output", "o"}};
  doc["mesh"] = {{"points", 10}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("mesh.points"),
                       ConfigError);
  doc["mesh"] = {{"nx", 12}, {"ny", 9}};
  const RunConfig c = parse_config(doc);
  CHECK(c.nx == 12);
  CHECK(c.ny == 9);

  doc = json{{"problem", "shepherd"}, {"output", "o"}};
  doc["mesh"] = {{"points", 10}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("mesh"),
                       ConfigError);
}

TEST_CASE("shepherd block is exclusive to the shepherd problem") {
  json doc = minimal();
  doc["shepherd"] = {{"sheep", 10}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("shepherd"),
                       ConfigError);

  doc = json{{"problem", "shepherd"}, {"output", "o"}};
  RunConfig c = parse_config(doc);  // defaults are a valid scenario
  CHECK(c.shepherd.num_sheep == 20);
  CHECK(c.shepherd.num_dogs == 1);

  doc["shepherd"] = {{"dogs", 2}};
  // two dogs but only the default single start position
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("dog_start"),
                       ConfigError);
  doc["shepherd"] = {{"dogs", 2},
                     {"dog_start", {{-6.0, 1.0}, {-6.0, -1.0}}}};
  c = parse_config(doc);
  CHECK(c.shepherd.num_dogs == 2);
  CHECK(c.shepherd.dog_start[1].y() == -1.0);
}

TEST_CASE("value constraints surface as config errors") {
  json doc = minimal();
  doc["cbo"] = {{"lambda", 2.0}, {"tau", 0.6}};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);  // lambda tau > 1

  doc = minimal();
  doc["gp"] = {{"sigma_gp2", -0.5}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("sigma_gp2"),
                       ConfigError);

  doc = json{{"problem", "poisson2d"}, {"output", "o"},
             {"cbo", {{"norm", "l2_h1"}}}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("norm"),
                       ConfigError);

  doc = minimal();
  doc["cbo"] = {{"norm", "l2_h1"}};
  CHECK(parse_config(doc).cbo.norm == NormKind::L2H1);
}

TEST_CASE("command line overrides replace file values") {
  json doc = minimal();
  doc["seed"] = 5;
  CliOverrides overrides;
  overrides.seed = 77;
  overrides.output = "elsewhere";
  overrides.repeats = 3;
  overrides.threads = 2;
  const RunConfig c = parse_config(doc, overrides);
  CHECK(c.seed == 77);
  CHECK(c.output == "elsewhere");
  CHECK(c.repeats == 3);
  CHECK(c.threads == 2);
}

TEST_CASE("output is required unless overridden") {
  json doc{{"problem", "quadratic_sanity"}};
  CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("output"),
                       ConfigError);
  CliOverrides overrides;
  overrides.output = "somewhere";
  CHECK_NOTHROW(parse_config(doc, overrides));
}

TEST_CASE("echo round-trips through the parser") {
  for (const char* name :
       {"quadratic_sanity", "harmonic1d", "poisson2d", "shepherd"}) {
    json doc{{"problem", name}, {"output", "out/roundtrip"}, {"seed", 9}};
    const RunConfig first = parse_config(doc);
    const json echo = config_echo(first);
    const RunConfig second = parse_config(echo);
    CHECK(config_echo(second) == echo);
    CHECK(config_hash(echo) == config_hash(config_echo(second)));
  }
}

TEST_CASE("hash is stable and sensitive") {
  const json echo = config_echo(parse_config(minimal()));
  const std::string h = config_hash(echo);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  json doc = minimal();
  doc["seed"] = 2;
  CHECK(config_hash(config_echo(parse_config(doc))) != h);
  // moving the artifacts does not change the experiment's identity
  json moved = minimal();
  moved["output"] = "elsewhere";
  CHECK(config_hash(config_echo(parse_config(moved))) == h);
}

TEST_CASE("file loading errors are config errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("every shipped configuration parses") {
  namespace fs = std::filesystem;
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(GPCBO_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CHECK_NOTHROW(load_config(entry.path()));
  }
  CHECK(seen >= 8);
}
