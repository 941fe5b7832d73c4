#include <doctest.h>

#include <cmath>
#include <limits>

#include "gpcbo/control.hpp"

using namespace gpcbo;

namespace {

ShepherdParams small_scenario() {
  ShepherdParams p;
  p.num_sheep = 6;
  p.num_dogs = 1;
  p.steps = 40;
  p.horizon = 2.0;
  p.sheep_sheep = {1.0, 2.0, 2.0, 0.5};
  p.sheep_dog = {0.1, 0.5, 5.0, 1.5};
  return p;
}

}  // namespace

TEST_CASE("interaction force values and symmetries") {
  const MorseParams m{1.0, 2.0, 2.0, 0.5};
  // frozen against an independent evaluation
  const Eigen::Vector2d f = morse_force(Eigen::Vector2d(1.0, 0.0), m);
  CHECK(f.x() == doctest::Approx(0.2380758030901341).epsilon(1e-14));
  CHECK(f.y() == 0.0);

  // exact antisymmetry, bit for bit
  for (double a : {0.3, 1.7, -2.2}) {
    const Eigen::Vector2d r(a, 0.5 * a * a - 1.0);
    const Eigen::Vector2d fwd = morse_force(r, m);
    const Eigen::Vector2d bwd = morse_force(-r, m);
    CHECK(fwd.x() == -bwd.x());
    CHECK(fwd.y() == -bwd.y());
  }

  // regularized at the origin instead of blowing up
  const Eigen::Vector2d at_zero = morse_force(Eigen::Vector2d::Zero(), m);
  CHECK(at_zero.x() == 0.0);
  CHECK(at_zero.y() == 0.0);
}

TEST_CASE("pairwise forces cancel in the aggregate") {
  const MorseParams m{1.0, 2.0, 2.0, 0.5};
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 9; ++i)
    pts.emplace_back(std::cos(0.7 * i) * (1.0 + 0.1 * i),
                     std::sin(1.3 * i) - 0.2 * i);
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) total += morse_force(pts[j] - pts[i], m);
  CHECK(total.norm() < 1e-12);
}

TEST_CASE("initial flock fills the disc deterministically") {
  const ShepherdParams p = small_scenario();
  const std::vector<Eigen::Vector2d> flock = initial_flock(p);
  REQUIRE(flock.size() == 6);
  for (const auto& x : flock)
    CHECK((x - p.flock_center).norm() <= p.flock_radius + 1e-12);
  double min_gap = 1e9;
  for (std::size_t i = 0; i < flock.size(); ++i)
    for (std::size_t j = i + 1; j < flock.size(); ++j)
      min_gap = std::min(min_gap, (flock[i] - flock[j]).norm());
  CHECK(min_gap > 0.1);
  const std::vector<Eigen::Vector2d> again = initial_flock(p);
  for (std::size_t i = 0; i < flock.size(); ++i)
    CHECK((flock[i] - again[i]).norm() == 0.0);
}

TEST_CASE("flock statistics") {
  Eigen::VectorXd positions(4);
  positions << 0.0, 0.0, 2.0, 0.0;
  const FlockStats stats = flock_stats(positions);
  CHECK(stats.center.x() == doctest::Approx(1.0));
  CHECK(stats.center.y() == 0.0);
  CHECK(stats.variance == doctest::Approx(1.0));
  CHECK_THROWS_AS(flock_stats(Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("dogs follow the control exactly") {
  ShepherdParams p = small_scenario();
  p.dog_start = {Eigen::Vector2d(-6.0, 0.25)};
  Eigen::MatrixXd control =
      Eigen::MatrixXd::Zero(p.control_nodes(), p.control_components());
  control.col(0).setConstant(1.5);  // constant x velocity
  const TrajectoryBundle traj = simulate(p, control);
  REQUIRE(traj.finite);
  REQUIRE(traj.times.size() == p.steps + 1);
  CHECK(traj.times[p.steps] == p.horizon);
  for (int t = 0; t <= p.steps; ++t) {
    // d' = u is linear, so RK4 integrates it without error
    CHECK(traj.dog_pos(t, 0) ==
          doctest::Approx(-6.0 + 1.5 * traj.times[t]).epsilon(1e-13));
    CHECK(traj.dog_pos(t, 1) == doctest::Approx(0.25).epsilon(1e-13));
  }
}

TEST_CASE("a distant dog leaves the flock dynamics untouched") {
  ShepherdParams near = small_scenario();
  ShepherdParams far = small_scenario();
  far.dog_start = {Eigen::Vector2d(1e6, 1e6)};
  const Eigen::MatrixXd zero =
      Eigen::MatrixXd::Zero(near.control_nodes(), near.control_components());
  const TrajectoryBundle with_dog = simulate(near, zero);
  const TrajectoryBundle without = simulate(far, zero);
  REQUIRE(with_dog.finite);
  REQUIRE(without.finite);
  // the default dog at (-6, 0) pushes the flock; the distant one cannot
  const double moved = (with_dog.sheep_pos.row(near.steps) -
                        without.sheep_pos.row(near.steps))
                           .cwiseAbs()
                           .maxCoeff();
  CHECK(moved > 1e-6);
  // and the far dog exerts force below double precision
  const double drift = (without.sheep_pos.row(0) -
                        without.sheep_pos.row(near.steps))
                           .cwiseAbs()
                           .maxCoeff();
  CHECK(drift < 2.0);  // the flock only relaxes under its own forces
}

TEST_CASE("integration converges at fourth order") {
  // Richardson-style: errors against the finest grid shrink ~16x per halving
  ShepherdParams coarse = small_scenario();
  ShepherdParams mid = small_scenario();
  ShepherdParams fine = small_scenario();
  coarse.steps = 10;
  mid.steps = 20;
  fine.steps = 40;
  // a control linear in time is resolution-independent under the piecewise
  // linear interpolation, so only the integrator error differs between grids
  const auto end_state = [](const ShepherdParams& p) {
    Eigen::MatrixXd control(p.control_nodes(), p.control_components());
    for (Eigen::Index t = 0; t < control.rows(); ++t) {
      const double time = p.horizon * static_cast<double>(t) / p.steps;
      control(t, 0) = 0.2 * time - 0.5;
      control(t, 1) = 0.3;
    }
    return Eigen::VectorXd(simulate(p, control).sheep_pos.row(p.steps));
  };
  const Eigen::VectorXd ref = end_state(fine);
  const double err_coarse = (end_state(coarse) - ref).norm();
  const double err_mid = (end_state(mid) - ref).norm();
  CHECK(err_coarse / err_mid > 10.0);
}

TEST_CASE("running cost reduces to the energy term") {
  ShepherdParams p = small_scenario();
  p.weight_variance = 0.0;
  p.weight_com = 0.0;
  p.weight_energy = 1.0;
  Eigen::MatrixXd control =
      Eigen::MatrixXd::Zero(p.control_nodes(), p.control_components());
  control.col(0).setConstant(1.0);
  // integral of |u|^2 = 1 over [0, horizon]
  CHECK(reduced_cost(p, control) ==
        doctest::Approx(p.horizon).epsilon(1e-12));
}

TEST_CASE("diverging states yield an infinite cost") {
  ShepherdParams p = small_scenario();
  Eigen::MatrixXd control =
      Eigen::MatrixXd::Constant(p.control_nodes(), p.control_components(),
                                1e308);
  CHECK(reduced_cost(p, control) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("stacked controls unpack component-major") {
  Eigen::VectorXd stacked(6);
  stacked << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  const Eigen::MatrixXd control = control_from_stacked(stacked, 3, 2);
  REQUIRE(control.rows() == 3);
  REQUIRE(control.cols() == 2);
  CHECK(control(0, 0) == 1.0);
  CHECK(control(2, 0) == 3.0);
  CHECK(control(0, 1) == 4.0);
  CHECK(control(2, 1) == 6.0);
  CHECK_THROWS_AS(control_from_stacked(stacked, 4, 2), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  ShepherdParams p = small_scenario();
  CHECK_NOTHROW(p.validate());
  p.num_dogs = 3;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_scenario();
  p.num_dogs = 2;  // dog_start still has one entry
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_scenario();
  p.sheep_sheep.attraction_range = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = small_scenario();
  p.steps = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("simulate validates the control shape") {
  const ShepherdParams p = small_scenario();
  CHECK_THROWS_AS(simulate(p, Eigen::MatrixXd::Zero(3, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      simulate(p, Eigen::MatrixXd::Zero(p.control_nodes(), 4)),
      std::invalid_argument);
}
