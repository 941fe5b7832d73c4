#include "gpcbo/control.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gpcbo {
namespace {

constexpr double kEpsSq = 1e-16;  // |r| -> sqrt(|r|^2 + eps^2), eps = 1e-8

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("shepherd: ") + name +
                                " must be positive");
}

void check_weight(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("shepherd: ") + name +
                                " must be >= 0");
}

// One evaluation of the right-hand side. State layout:
// [sheep_pos (2 N_s), sheep_vel (2 N_s), dog_pos (2 N_d)].
void derivative(const ShepherdParams& p, const Eigen::VectorXd& state,
                const Eigen::RowVectorXd& u, Eigen::VectorXd& dstate) {
  const int ns = p.num_sheep;
  const int nd = p.num_dogs;
  dstate.resize(state.size());

  const auto pos = [&](int i) { return state.segment<2>(2 * i); };
  const auto vel = [&](int i) { return state.segment<2>(2 * ns + 2 * i); };
  const auto dog = [&](int k) { return state.segment<2>(4 * ns + 2 * k); };

  // x' = v
  dstate.head(2 * ns) = state.segment(2 * ns, 2 * ns);

  // accumulate accelerations
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(2 * ns);
  const double inv_ns = 1.0 / ns;
  for (int i = 0; i < ns; ++i) {
    for (int j = i + 1; j < ns; ++j) {
      const Eigen::Vector2d f = morse_force(pos(j) - pos(i), p.sheep_sheep);
      // K(-r) = -K(r), so the ji term is the exact negation
      acc.segment<2>(2 * i) -= inv_ns * f;
      acc.segment<2>(2 * j) += inv_ns * f;
    }
    for (int k = 0; k < nd; ++k)
      acc.segment<2>(2 * i) -= morse_force(dog(k) - pos(i), p.sheep_dog);
    acc.segment<2>(2 * i) -= p.damping * vel(i);
  }
  dstate.segment(2 * ns, 2 * ns) = acc;

  // d' = u(t)
  for (int k = 0; k < nd; ++k)
    dstate.segment<2>(4 * ns + 2 * k) = u.segment<2>(2 * k).transpose();
}

}  // namespace

void MorseParams::validate() const {
  check_positive(repulsion_strength, "repulsion_strength");
  check_positive(repulsion_range, "repulsion_range");
  check_positive(attraction_strength, "attraction_strength");
  check_positive(attraction_range, "attraction_range");
}

void ShepherdParams::validate() const {
  if (num_sheep < 1)
    throw std::invalid_argument("shepherd: need at least one sheep");
  if (num_dogs < 1 || num_dogs > 2)
    throw std::invalid_argument("shepherd: num_dogs must be 1 or 2, got " +
                                std::to_string(num_dogs));
  check_positive(damping, "damping");
  sheep_sheep.validate();
  sheep_dog.validate();
  check_weight(weight_variance, "weight_variance");
  check_weight(weight_com, "weight_com");
  check_weight(weight_energy, "weight_energy");
  check_weight(target_variance, "target_variance");
  check_positive(horizon, "horizon");
  if (steps < 2)
    throw std::invalid_argument("shepherd: steps must be >= 2");
  check_positive(flock_radius, "flock_radius");
  if (static_cast<int>(dog_start.size()) != num_dogs)
    throw std::invalid_argument("shepherd: dog_start needs one entry per dog");
  if (!destination.allFinite() || !flock_center.allFinite())
    throw std::invalid_argument("shepherd: non-finite scenario point");
  for (const auto& d : dog_start)
    if (!d.allFinite())
      throw std::invalid_argument("shepherd: non-finite dog start");
}

Eigen::Vector2d morse_force(const Eigen::Vector2d& r, const MorseParams& m) {
  const double s = std::sqrt(r.squaredNorm() + kEpsSq);
  const double g =
      -m.repulsion_strength / m.repulsion_range * std::exp(-s / m.repulsion_range) +
      m.attraction_strength / m.attraction_range * std::exp(-s / m.attraction_range);
  return (g / s) * r;
}

std::vector<Eigen::Vector2d> initial_flock(const ShepherdParams& params) {
  // golden-angle sunflower: even disc coverage, no randomness
  constexpr double kGoldenAngle = 2.3999632297286533;
  std::vector<Eigen::Vector2d> flock(params.num_sheep);
  for (int i = 0; i < params.num_sheep; ++i) {
    const double rad =
        params.flock_radius * std::sqrt((i + 0.5) / params.num_sheep);
    const double ang = i * kGoldenAngle;
    flock[i] = params.flock_center +
               rad * Eigen::Vector2d(std::cos(ang), std::sin(ang));
  }
  return flock;
}

TrajectoryBundle simulate(const ShepherdParams& params,
                          const Eigen::MatrixXd& control) {
  params.validate();
  if (control.rows() != params.control_nodes() ||
      control.cols() != params.control_components())
    throw std::invalid_argument(
        "shepherd: control must be " + std::to_string(params.control_nodes()) +
        " x " + std::to_string(params.control_components()) + ", got " +
        std::to_string(control.rows()) + " x " +
        std::to_string(control.cols()));

  const int ns = params.num_sheep;
  const int nd = params.num_dogs;
  const int m = params.steps;
  const double h = params.horizon / m;

  TrajectoryBundle traj;
  traj.times.resize(m + 1);
  for (int t = 0; t <= m; ++t) traj.times[t] = t * h;
  traj.times[m] = params.horizon;
  traj.sheep_pos.setZero(m + 1, 2 * ns);
  traj.sheep_vel.setZero(m + 1, 2 * ns);
  traj.dog_pos.setZero(m + 1, 2 * nd);

  Eigen::VectorXd state = Eigen::VectorXd::Zero(4 * ns + 2 * nd);
  const std::vector<Eigen::Vector2d> flock = initial_flock(params);
  for (int i = 0; i < ns; ++i) state.segment<2>(2 * i) = flock[i];
  for (int k = 0; k < nd; ++k)
    state.segment<2>(4 * ns + 2 * k) = params.dog_start[k];

  const auto record = [&](int t) {
    traj.sheep_pos.row(t) = state.head(2 * ns);
    traj.sheep_vel.row(t) = state.segment(2 * ns, 2 * ns);
    traj.dog_pos.row(t) = state.tail(2 * nd);
  };
  record(0);

  Eigen::VectorXd k1, k2, k3, k4;
  for (int t = 0; t < m; ++t) {
    // the piecewise-linear control at the stage times t, t + h/2, t + h
    const Eigen::RowVectorXd u0 = control.row(t);
    const Eigen::RowVectorXd u1 = control.row(t + 1);
    const Eigen::RowVectorXd um = 0.5 * (u0 + u1);

    derivative(params, state, u0, k1);
    derivative(params, state + (h / 2.0) * k1, um, k2);
    derivative(params, state + (h / 2.0) * k2, um, k3);
    derivative(params, state + h * k3, u1, k4);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!state.allFinite()) {
      traj.finite = false;
      return traj;
    }
    record(t + 1);
  }
  return traj;
}

FlockStats flock_stats(const Eigen::VectorXd& positions) {
  if (positions.size() < 2 || positions.size() % 2 != 0)
    throw std::invalid_argument("shepherd: positions must be x,y pairs");
  const Eigen::Index n = positions.size() / 2;
  FlockStats stats;
  stats.center.setZero();
  for (Eigen::Index i = 0; i < n; ++i)
    stats.center += positions.segment<2>(2 * i);
  stats.center /= static_cast<double>(n);
  stats.variance = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    stats.variance += (positions.segment<2>(2 * i) - stats.center).squaredNorm();
  stats.variance /= static_cast<double>(n);
  return stats;
}

double reduced_cost(const ShepherdParams& params,
                    const Eigen::MatrixXd& control) {
  const TrajectoryBundle traj = simulate(params, control);
  if (!traj.finite) return std::numeric_limits<double>::infinity();

  const int m = params.steps;
  const double h = params.horizon / m;
  double total = 0.0;
  for (int t = 0; t <= m; ++t) {
    const FlockStats stats = flock_stats(traj.sheep_pos.row(t).transpose());
    const double dv = stats.variance - params.target_variance;
    double integrand = params.weight_variance * dv * dv +
                       params.weight_com *
                           (stats.center - params.destination).squaredNorm() +
                       params.weight_energy * control.row(t).squaredNorm();
    total += (t == 0 || t == m) ? 0.5 * h * integrand : h * integrand;
  }
  if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
  return total;
}

Eigen::MatrixXd control_from_stacked(const Eigen::VectorXd& stacked,
                                     Eigen::Index nodes, int components) {
  if (components < 1 || stacked.size() != nodes * components)
    throw std::invalid_argument("shepherd: stacked control has length " +
                                std::to_string(stacked.size()) + ", expected " +
                                std::to_string(nodes * components));
  Eigen::MatrixXd control(nodes, components);
  for (int c = 0; c < components; ++c)
    control.col(c) = stacked.segment(c * nodes, nodes);
  return control;
}

}  // namespace gpcbo
