#include "gpcbo/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gpcbo/errors.hpp"

namespace gpcbo {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(join(path, it.key()), "unknown key");
  }
}

const json* maybe(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Eigen::Vector2d as_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

MorseParams parse_morse(const json& obj, const std::string& path,
                        const MorseParams& defaults) {
  if (!obj.is_object()) fail(path, "expected an object");
  check_keys(obj, path, {"c_rep", "l_rep", "c_att", "l_att"});
  MorseParams m = defaults;
  if (const json* v = maybe(obj, "c_rep")) m.repulsion_strength = as_number(*v, join(path, "c_rep"));
  if (const json* v = maybe(obj, "l_rep")) m.repulsion_range = as_number(*v, join(path, "l_rep"));
  if (const json* v = maybe(obj, "c_att")) m.attraction_strength = as_number(*v, join(path, "c_att"));
  if (const json* v = maybe(obj, "l_att")) m.attraction_range = as_number(*v, join(path, "l_att"));
  return m;
}

struct ProblemNameEntry {
  ProblemKind kind;
  const char* name;
};

constexpr ProblemNameEntry kProblemNames[] = {
    {ProblemKind::Harmonic1D, "harmonic1d"},
    {ProblemKind::Harmonic1DConstrained, "harmonic1d_constrained"},
    {ProblemKind::Poisson2D, "poisson2d"},
    {ProblemKind::Poisson2DConstrained, "poisson2d_constrained"},
    {ProblemKind::Nonlinear2D, "nonlinear2d"},
    {ProblemKind::Shepherd, "shepherd"},
    {ProblemKind::QuadraticSanity, "quadratic_sanity"},
};

}  // namespace

std::string problem_name(ProblemKind kind) {
  for (const auto& entry : kProblemNames)
    if (entry.kind == kind) return entry.name;
  throw std::logic_error("unreachable problem kind");
}

RunConfig parse_config(const nlohmann::json& doc, const CliOverrides& overrides) {
  if (!doc.is_object()) throw ConfigError("config: root must be a JSON object");
  check_keys(doc, "", {"problem", "seed", "repeats", "threads", "output",
                       "mesh", "kernel", "gp", "cbo", "shepherd"});

  RunConfig c;

  const json* problem = maybe(doc, "problem");
  if (!problem) fail("problem", "required");
  const std::string pname = as_string(*problem, "problem");
  bool found = false;
  for (const auto& entry : kProblemNames)
    if (pname == entry.name) {
      c.problem = entry.kind;
      found = true;
      break;
    }
  if (!found) {
    std::string names;
    for (const auto& entry : kProblemNames)
      names += std::string(names.empty() ? "" : ", ") + entry.name;
    fail("problem", "unknown problem '" + pname + "' (expected one of " +
                        names + ")");
  }

  if (const json* v = maybe(doc, "seed")) c.seed = as_seed(*v, "seed");
  if (const json* v = maybe(doc, "repeats")) c.repeats = as_int(*v, "repeats");
  if (const json* v = maybe(doc, "threads")) c.threads = as_int(*v, "threads");
  if (const json* v = maybe(doc, "output"))
    c.output = as_string(*v, "output");

  const bool is_1d = c.problem == ProblemKind::Harmonic1D ||
                     c.problem == ProblemKind::Harmonic1DConstrained ||
                     c.problem == ProblemKind::QuadraticSanity;
  const bool is_2d = c.problem == ProblemKind::Poisson2D ||
                     c.problem == ProblemKind::Poisson2DConstrained ||
                     c.problem == ProblemKind::Nonlinear2D;

  if (const json* mesh = maybe(doc, "mesh")) {
    if (!mesh->is_object()) fail("mesh", "expected an object");
    if (c.problem == ProblemKind::Shepherd)
      fail("mesh", "the shepherd grid comes from shepherd.steps and "
                   "shepherd.horizon");
    if (is_1d) {
      check_keys(*mesh, "mesh", {"points"});
      if (const json* v = maybe(*mesh, "points"))
        c.points = as_int(*v, "mesh.points");
    } else {
      check_keys(*mesh, "mesh", {"nx", "ny"});
      if (const json* v = maybe(*mesh, "nx")) c.nx = as_int(*v, "mesh.nx");
      if (const json* v = maybe(*mesh, "ny")) c.ny = as_int(*v, "mesh.ny");
    }
  }

  if (const json* kernel = maybe(doc, "kernel")) {
    if (!kernel->is_object()) fail("kernel", "expected an object");
    check_keys(*kernel, "kernel",
               {"family", "nu", "length_scale", "signal_variance"});
    std::string family = "matern";
    if (const json* v = maybe(*kernel, "family"))
      family = as_string(*v, "kernel.family");
    if (family == "matern") {
      c.kernel.family = KernelFamily::MaternHalfInteger;
      if (const json* v = maybe(*kernel, "nu"))
        c.kernel.smoothness = as_number(*v, "kernel.nu");
    } else if (family == "squared_exponential") {
      c.kernel.family = KernelFamily::SquaredExponential;
      if (maybe(*kernel, "nu"))
        fail("kernel.nu", "smoothness only applies to the matern family");
    } else {
      fail("kernel.family",
           "expected 'matern' or 'squared_exponential', got '" + family + "'");
    }
    if (const json* v = maybe(*kernel, "length_scale"))
      c.kernel.length_scale = as_number(*v, "kernel.length_scale");
    if (const json* v = maybe(*kernel, "signal_variance"))
      c.kernel.signal_variance = as_number(*v, "kernel.signal_variance");
  }

  if (const json* gp = maybe(doc, "gp")) {
    if (!gp->is_object()) fail("gp", "expected an object");
    check_keys(*gp, "gp", {"sigma_gp2", "noise_on_train"});
    if (const json* v = maybe(*gp, "sigma_gp2"))
      c.sigma_gp2 = as_number(*v, "gp.sigma_gp2");
    if (const json* v = maybe(*gp, "noise_on_train"))
      c.noise_on_train = as_bool(*v, "gp.noise_on_train");
  }

  if (const json* cbo = maybe(doc, "cbo")) {
    if (!cbo->is_object()) fail("cbo", "expected an object");
    check_keys(*cbo, "cbo",
               {"agents", "alpha", "lambda", "tau", "horizon", "norm"});
    if (const json* v = maybe(*cbo, "agents"))
      c.cbo.num_agents = as_int(*v, "cbo.agents");
    if (const json* v = maybe(*cbo, "alpha"))
      c.cbo.alpha = as_number(*v, "cbo.alpha");
    if (const json* v = maybe(*cbo, "lambda"))
      c.cbo.lambda = as_number(*v, "cbo.lambda");
    if (const json* v = maybe(*cbo, "tau")) c.cbo.tau = as_number(*v, "cbo.tau");
    if (const json* v = maybe(*cbo, "horizon"))
      c.cbo.horizon = as_number(*v, "cbo.horizon");
    if (const json* v = maybe(*cbo, "norm")) {
      const std::string norm = as_string(*v, "cbo.norm");
      if (norm == "l2")
        c.cbo.norm = NormKind::L2;
      else if (norm == "l2_h1")
        c.cbo.norm = NormKind::L2H1;
      else
        fail("cbo.norm", "expected 'l2' or 'l2_h1', got '" + norm + "'");
    }
  }

  const json* shepherd = maybe(doc, "shepherd");
  if (shepherd && c.problem != ProblemKind::Shepherd)
    fail("shepherd", "only valid for the shepherd problem");
  if (shepherd) {
    if (!shepherd->is_object()) fail("shepherd", "expected an object");
    check_keys(*shepherd, "shepherd",
               {"sheep", "dogs", "damping", "morse_sheep_sheep",
                "morse_sheep_dog", "weight_variance", "weight_com",
                "weight_energy", "target_variance", "destination", "horizon",
                "steps", "flock_center", "flock_radius", "dog_start"});
    ShepherdParams& s = c.shepherd;
    if (const json* v = maybe(*shepherd, "sheep"))
      s.num_sheep = as_int(*v, "shepherd.sheep");
    if (const json* v = maybe(*shepherd, "dogs"))
      s.num_dogs = as_int(*v, "shepherd.dogs");
    if (const json* v = maybe(*shepherd, "damping"))
      s.damping = as_number(*v, "shepherd.damping");
    if (const json* v = maybe(*shepherd, "morse_sheep_sheep"))
      s.sheep_sheep = parse_morse(*v, "shepherd.morse_sheep_sheep", s.sheep_sheep);
    if (const json* v = maybe(*shepherd, "morse_sheep_dog"))
      s.sheep_dog = parse_morse(*v, "shepherd.morse_sheep_dog", s.sheep_dog);
    if (const json* v = maybe(*shepherd, "weight_variance"))
      s.weight_variance = as_number(*v, "shepherd.weight_variance");
    if (const json* v = maybe(*shepherd, "weight_com"))
      s.weight_com = as_number(*v, "shepherd.weight_com");
    if (const json* v = maybe(*shepherd, "weight_energy"))
      s.weight_energy = as_number(*v, "shepherd.weight_energy");
    if (const json* v = maybe(*shepherd, "target_variance"))
      s.target_variance = as_number(*v, "shepherd.target_variance");
    if (const json* v = maybe(*shepherd, "destination"))
      s.destination = as_point(*v, "shepherd.destination");
    if (const json* v = maybe(*shepherd, "horizon"))
      s.horizon = as_number(*v, "shepherd.horizon");
    if (const json* v = maybe(*shepherd, "steps"))
      s.steps = as_int(*v, "shepherd.steps");
    if (const json* v = maybe(*shepherd, "flock_center"))
      s.flock_center = as_point(*v, "shepherd.flock_center");
    if (const json* v = maybe(*shepherd, "flock_radius"))
      s.flock_radius = as_number(*v, "shepherd.flock_radius");
    if (const json* v = maybe(*shepherd, "dog_start")) {
      if (!v->is_array() || v->empty())
        fail("shepherd.dog_start", "expected a list of [x, y] points");
      s.dog_start.clear();
      for (std::size_t i = 0; i < v->size(); ++i)
        s.dog_start.push_back(as_point(
            (*v)[i], "shepherd.dog_start[" + std::to_string(i) + "]"));
    }
  }

  if (overrides.seed) c.seed = *overrides.seed;
  if (overrides.output) c.output = *overrides.output;
  if (overrides.repeats) c.repeats = *overrides.repeats;
  if (overrides.threads) c.threads = *overrides.threads;

  if (c.output.empty())
    fail("output", "required (or pass --out)");
  if (c.repeats < 1) fail("repeats", "must be >= 1");
  if (c.threads < 1) fail("threads", "must be >= 1");
  if (is_1d && c.points < 3) fail("mesh.points", "must be >= 3");
  if (is_2d && (c.nx < 3 || c.ny < 3)) fail("mesh.nx", "grid must be >= 3x3");

  try {
    c.kernel.validate();
    c.cbo.validate();
    if (c.problem == ProblemKind::Shepherd) c.shepherd.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.sigma_gp2 >= 0.0)) fail("gp.sigma_gp2", "must be >= 0");
  if (c.cbo.norm == NormKind::L2H1 && !is_1d)
    fail("cbo.norm", "the l2_h1 norm is only available on 1D meshes");
  return c;
}

RunConfig load_config(const std::filesystem::path& path,
                      const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  return parse_config(doc, overrides);
}

nlohmann::json config_echo(const RunConfig& c) {
  json echo;
  echo["problem"] = problem_name(c.problem);
  echo["seed"] = c.seed;
  echo["repeats"] = c.repeats;
  echo["threads"] = c.threads;
  echo["output"] = c.output.string();

  if (c.problem == ProblemKind::Shepherd) {
    const ShepherdParams& s = c.shepherd;
    json morse_ss{{"c_rep", s.sheep_sheep.repulsion_strength},
                  {"l_rep", s.sheep_sheep.repulsion_range},
                  {"c_att", s.sheep_sheep.attraction_strength},
                  {"l_att", s.sheep_sheep.attraction_range}};
    json morse_sd{{"c_rep", s.sheep_dog.repulsion_strength},
                  {"l_rep", s.sheep_dog.repulsion_range},
                  {"c_att", s.sheep_dog.attraction_strength},
                  {"l_att", s.sheep_dog.attraction_range}};
    json dogs = json::array();
    for (const auto& d : s.dog_start) dogs.push_back({d.x(), d.y()});
    echo["shepherd"] = {
        {"sheep", s.num_sheep},
        {"dogs", s.num_dogs},
        {"damping", s.damping},
        {"morse_sheep_sheep", morse_ss},
        {"morse_sheep_dog", morse_sd},
        {"weight_variance", s.weight_variance},
        {"weight_com", s.weight_com},
        {"weight_energy", s.weight_energy},
        {"target_variance", s.target_variance},
        {"destination", {s.destination.x(), s.destination.y()}},
        {"horizon", s.horizon},
        {"steps", s.steps},
        {"flock_center", {s.flock_center.x(), s.flock_center.y()}},
        {"flock_radius", s.flock_radius},
        {"dog_start", dogs},
    };
  } else if (c.problem == ProblemKind::Poisson2D ||
             c.problem == ProblemKind::Poisson2DConstrained ||
             c.problem == ProblemKind::Nonlinear2D) {
    echo["mesh"] = {{"nx", c.nx}, {"ny", c.ny}};
  } else {
    echo["mesh"] = {{"points", c.points}};
  }

  json kernel;
  kernel["family"] = c.kernel.family == KernelFamily::MaternHalfInteger
                         ? "matern"
                         : "squared_exponential";
  if (c.kernel.family == KernelFamily::MaternHalfInteger)
    kernel["nu"] = c.kernel.smoothness;
  kernel["length_scale"] = c.kernel.length_scale;
  kernel["signal_variance"] = c.kernel.signal_variance;
  echo["kernel"] = kernel;

  echo["gp"] = {{"sigma_gp2", c.sigma_gp2}, {"noise_on_train", c.noise_on_train}};
  echo["cbo"] = {
      {"agents", c.cbo.num_agents},
      {"alpha", c.cbo.alpha},
      {"lambda", c.cbo.lambda},
      {"tau", c.cbo.tau},
      {"horizon", c.cbo.horizon},
      {"norm", c.cbo.norm == NormKind::L2 ? "l2" : "l2_h1"},
  };
  return echo;
}

std::string config_hash(const nlohmann::json& echo) {
  // the output directory is a storage detail, not part of the experiment
  json keyed = echo;
  keyed.erase("output");
  const std::string dump = keyed.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gpcbo
