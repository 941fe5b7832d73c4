#include "gpcbo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "gpcbo/bvp.hpp"
#include "gpcbo/cbo.hpp"
#include "gpcbo/control.hpp"
#include "gpcbo/csv.hpp"
#include "gpcbo/errors.hpp"
#include "gpcbo/gp.hpp"

namespace gpcbo {
namespace {

using nlohmann::json;

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

double median_of(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

void write_history(const std::filesystem::path& path, const History& history) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(history.size());
  for (const HistoryRecord& rec : history)
    rows.push_back({csv_num(rec.iteration), csv_num(rec.best_cost),
                    csv_num(rec.consensus_cost), csv_num(rec.spread),
                    csv_opt(rec.err_l2), csv_opt(rec.err_linf),
                    csv_num(rec.seconds)});
  write_csv(path,
            {"iteration", "best_cost", "consensus_cost", "spread", "err_l2",
             "err_linf", "seconds"},
            rows);
}

void write_bvp_solution(const std::filesystem::path& path, const Mesh& mesh,
                        const Eigen::VectorXd& values,
                        const Eigen::VectorXd& exact) {
  const bool flat = mesh.dim() == 1;
  std::vector<std::string> header =
      flat ? std::vector<std::string>{"x", "value", "exact"}
           : std::vector<std::string>{"x", "y", "value", "exact"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(mesh.num_points());
  for (Eigen::Index p = 0; p < mesh.num_points(); ++p) {
    std::vector<std::string> row{csv_num(mesh.points()(p, 0))};
    if (!flat) row.push_back(csv_num(mesh.points()(p, 1)));
    row.push_back(csv_num(values[p]));
    row.push_back(csv_num(exact[p]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_constraints(const std::filesystem::path& path,
                       const TrainingData& constraints,
                       const Eigen::VectorXd& probe_values) {
  const bool flat = constraints.points.cols() == 1;
  std::vector<std::string> header =
      flat ? std::vector<std::string>{"x", "value", "prescribed"}
           : std::vector<std::string>{"x", "y", "value", "prescribed"};
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index j = 0; j < constraints.size(); ++j) {
    std::vector<std::string> row{csv_num(constraints.points(j, 0))};
    if (!flat) row.push_back(csv_num(constraints.points(j, 1)));
    row.push_back(csv_num(probe_values[j]));
    row.push_back(csv_num(constraints.values[j]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_control(const std::filesystem::path& path,
                   const Eigen::VectorXd& times,
                   const Eigen::MatrixXd& control) {
  std::vector<std::string> header{"t"};
  for (int k = 0; 2 * k < control.cols(); ++k) {
    header.push_back("u" + std::to_string(k) + "_x");
    header.push_back("u" + std::to_string(k) + "_y");
  }
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index t = 0; t < control.rows(); ++t) {
    std::vector<std::string> row{csv_num(times[t])};
    for (Eigen::Index j = 0; j < control.cols(); ++j)
      row.push_back(csv_num(control(t, j)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_trajectory(const std::filesystem::path& path,
                      const TrajectoryBundle& bundle) {
  const int dogs = static_cast<int>(bundle.dog_pos.cols()) / 2;
  const int sheep = static_cast<int>(bundle.sheep_pos.cols()) / 2;
  std::vector<std::string> header{"t", "var", "com_x", "com_y"};
  for (int k = 0; k < dogs; ++k) {
    header.push_back("dog" + std::to_string(k) + "_x");
    header.push_back("dog" + std::to_string(k) + "_y");
  }
  for (int i = 0; i < sheep; ++i) {
    header.push_back("sheep" + std::to_string(i) + "_x");
    header.push_back("sheep" + std::to_string(i) + "_y");
  }
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index t = 0; t < bundle.times.size(); ++t) {
    const FlockStats stats = flock_stats(bundle.sheep_pos.row(t).transpose());
    std::vector<std::string> row{csv_num(bundle.times[t]),
                                 csv_num(stats.variance),
                                 csv_num(stats.center.x()),
                                 csv_num(stats.center.y())};
    for (Eigen::Index j = 0; j < bundle.dog_pos.cols(); ++j)
      row.push_back(csv_num(bundle.dog_pos(t, j)));
    for (Eigen::Index j = 0; j < bundle.sheep_pos.cols(); ++j)
      row.push_back(csv_num(bundle.sheep_pos(t, j)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json to_json_array(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(finite_or_null(v));
  return arr;
}

}  // namespace

json run_experiment(const RunConfig& config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec)
    throw IoError("cannot create " + config.output.string() + ": " +
                  ec.message());

  const json echo = config_echo(config);
  const std::string hash = config_hash(echo);

  const Mesh mesh = [&]() -> Mesh {
    switch (config.problem) {
      case ProblemKind::Shepherd:
        return Mesh::interval(0.0, config.shepherd.horizon,
                              config.shepherd.control_nodes());
      case ProblemKind::QuadraticSanity:
        return Mesh::interval(0.0, 1.0, config.points);
      case ProblemKind::Harmonic1D:
      case ProblemKind::Harmonic1DConstrained:
        return Mesh::interval(0.0, std::numbers::pi / 2, config.points);
      default:
        return Mesh::unit_square(config.nx, config.ny);
    }
  }();
  const Eigen::Index num_nodes = mesh.num_points();

  std::optional<BvpProblem> bvp;
  CostFn cost;
  RunOptions options;
  options.threads = config.threads;
  double zero_control_cost = std::numeric_limits<double>::quiet_NaN();
  TrainingData train;

  switch (config.problem) {
    case ProblemKind::Harmonic1D:
    case ProblemKind::Harmonic1DConstrained:
    case ProblemKind::Poisson2D:
    case ProblemKind::Poisson2DConstrained:
    case ProblemKind::Nonlinear2D: {
      const BvpKind kind = config.problem == ProblemKind::Nonlinear2D
                               ? BvpKind::NonlinearPoisson2D
                           : (config.problem == ProblemKind::Harmonic1D ||
                              config.problem ==
                                  ProblemKind::Harmonic1DConstrained)
                               ? BvpKind::Harmonic1D
                               : BvpKind::Poisson2D;
      const bool constrained =
          config.problem == ProblemKind::Harmonic1DConstrained ||
          config.problem == ProblemKind::Poisson2DConstrained;
      bvp = make_problem(kind, mesh, constrained);
      options.probe_slots = static_cast<int>(bvp->constraints.size());
      options.exact = bvp->exact;
      train = bvp->training();
      cost = [problem = *bvp, num_nodes](const Eigen::VectorXd& u) {
        return problem.cost(u.head(num_nodes));
      };
      break;
    }
    case ProblemKind::QuadraticSanity: {
      Eigen::VectorXd target(num_nodes);
      for (Eigen::Index p = 0; p < num_nodes; ++p)
        target[p] = std::sin(std::numbers::pi * mesh.points()(p, 0));
      options.exact = target;
      train.points = Eigen::MatrixXd(2, 1);
      train.points << 0.0, 1.0;
      train.values = Eigen::VectorXd::Zero(2);
      const Eigen::VectorXd weights = mesh.quad_weights();
      cost = [target, weights, num_nodes](const Eigen::VectorXd& u) {
        return weights.dot(
            (u.head(num_nodes) - target).array().square().matrix());
      };
      break;
    }
    case ProblemKind::Shepherd: {
      options.components = config.shepherd.control_components();
      const ShepherdParams params = config.shepherd;
      cost = [params](const Eigen::VectorXd& u) {
        return reduced_cost(params, control_from_stacked(
                                        u, params.control_nodes(),
                                        params.control_components()));
      };
      zero_control_cost = reduced_cost(
          params, Eigen::MatrixXd::Zero(params.control_nodes(),
                                        params.control_components()));
      break;
    }
  }

  Eigen::MatrixXd eval_points = mesh.points();
  if (options.probe_slots > 0) {
    eval_points.conservativeResize(num_nodes + options.probe_slots,
                                   Eigen::NoChange);
    eval_points.bottomRows(options.probe_slots) = bvp->constraints.points;
  }
  const GaussianMeasure gp_c = build_posterior_at(
      config.kernel, eval_points, config.sigma_gp2, train,
      config.noise_on_train);
  const GaussianMeasure gp_0 = homogeneous(gp_c);

  json echo_doc = echo;
  echo_doc["config_hash"] = hash;
  echo_doc["derived"] = {
      {"iterations", config.cbo.iterations()},
      {"nodes", num_nodes},
      {"probe_slots", options.probe_slots},
      {"components", options.components},
      {"jitter_constrained", gp_c.jitter()},
      {"jitter_noise", gp_0.jitter()},
  };
  write_json_file(config.output / "config_echo.json", echo_doc);

  std::vector<double> final_costs, initial_medians, initial_bests;
  std::vector<double> final_err_l2, final_err_linf, residuals;
  std::vector<std::uint64_t> seeds;

  for (int r = 0; r < config.repeats; ++r) {
    CboParams params = config.cbo;
    params.seed = config.seed + static_cast<std::uint64_t>(r);
    seeds.push_back(params.seed);

    double initial_median = std::numeric_limits<double>::quiet_NaN();
    double initial_best = std::numeric_limits<double>::quiet_NaN();
    RunOptions repeat_options = options;
    repeat_options.observer = [&](const Ensemble& ensemble,
                                  const Eigen::VectorXd&) {
      if (ensemble.iteration == 0) {
        initial_median = median_of(ensemble.costs);
        initial_best = ensemble.costs.minCoeff();
      }
    };

    const CboResult result =
        run(cost, gp_c, gp_0, params, mesh, repeat_options);

    char name[16];
    std::snprintf(name, sizeof(name), "rep%03d", r);
    const fs::path rep_dir = config.output / name;
    fs::create_directories(rep_dir, ec);
    if (ec)
      throw IoError("cannot create " + rep_dir.string() + ": " + ec.message());

    write_history(rep_dir / "history.csv", result.history);

    if (config.problem == ProblemKind::Shepherd) {
      const Eigen::MatrixXd control = control_from_stacked(
          result.consensus, config.shepherd.control_nodes(),
          config.shepherd.control_components());
      write_control(rep_dir / "solution.csv", mesh.points().col(0), control);
      write_trajectory(rep_dir / "trajectory.csv",
                       simulate(config.shepherd, control));
    } else {
      write_bvp_solution(rep_dir / "solution.csv", mesh,
                         result.consensus.head(num_nodes), *options.exact);
    }
    if (options.probe_slots > 0) {
      const Eigen::VectorXd probe_values =
          result.consensus.tail(options.probe_slots);
      write_constraints(rep_dir / "constraints.csv", bvp->constraints,
                        probe_values);
      residuals.push_back(
          (probe_values - bvp->constraints.values).cwiseAbs().maxCoeff());
    }

    const HistoryRecord& last = result.history.back();
    final_costs.push_back(last.consensus_cost);
    initial_medians.push_back(initial_median);
    initial_bests.push_back(initial_best);
    if (options.exact) {
      final_err_l2.push_back(last.err_l2);
      final_err_linf.push_back(last.err_linf);
    }
  }

  json summary;
  summary["problem"] = problem_name(config.problem);
  summary["config_hash"] = hash;
  summary["repeats"] = config.repeats;
  summary["seeds"] = seeds;
  summary["final_costs"] = to_json_array(final_costs);
  summary["mean_final_cost"] = finite_or_null(
      std::accumulate(final_costs.begin(), final_costs.end(), 0.0) /
      static_cast<double>(final_costs.size()));
  summary["best_final_cost"] = finite_or_null(
      *std::min_element(final_costs.begin(), final_costs.end()));
  summary["initial_median_costs"] = to_json_array(initial_medians);
  summary["initial_best_costs"] = to_json_array(initial_bests);
  if (!final_err_l2.empty()) {
    summary["final_err_l2"] = to_json_array(final_err_l2);
    summary["final_err_linf"] = to_json_array(final_err_linf);
  }
  if (!residuals.empty())
    summary["constraint_residuals"] = to_json_array(residuals);
  if (config.problem == ProblemKind::Shepherd)
    summary["zero_control_cost"] = finite_or_null(zero_control_cost);
  write_json_file(config.output / "summary.json", summary);
  return summary;
}

}  // namespace gpcbo
