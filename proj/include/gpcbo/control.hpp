#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gpcbo {

/// Interaction force parameters. The force law is
///   K(r) = (-C_r/l_r exp(-|r|/l_r) + C_a/l_a exp(-|r|/l_a)) r/|r|
/// with |r| regularized to sqrt(|r|^2 + 1e-16). Note the leading minus on
/// the C_r branch: under the equations of motion below the C_a branch is the
/// one that pushes particles apart, so "repelling" kernels should put their
/// weight there (the shipped scenarios do).
struct MorseParams {
  double repulsion_strength = 1.0;  // C_r
  double repulsion_range = 1.0;     // l_r
  double attraction_strength = 1.0; // C_a
  double attraction_range = 1.0;    // l_a

  void validate() const;  // all four strictly positive
};

/// Herding scenario: num_sheep second-order agents, num_dogs steered by the
/// control, flock started on a deterministic sunflower disc layout with zero
/// velocity. Dynamics per sheep i:
///   x_i' = v_i
///   v_i' = -damping v_i - (1/N_s) sum_j K_s(x_j - x_i) - sum_k K_d(d_k - x_i)
/// and d_k' = u_k(t), integrated with fixed-step RK4 (steps of length
/// horizon / steps). The control is piecewise linear on the output grid.
struct ShepherdParams {
  int num_sheep = 20;
  int num_dogs = 1;  // 1 or 2
  double damping = 0.8;
  // Default forces give a cohesive flock and a dog the sheep flee from.
  // Equal strength/range pairs would cancel to a zero force, so the defaults
  // are deliberately asymmetric.
  MorseParams sheep_sheep{1.0, 2.0, 2.0, 0.5};
  MorseParams sheep_dog{0.1, 0.5, 5.0, 1.5};
  double weight_variance = 1.0;  // sigma_1, on (V - target_variance)^2
  double weight_com = 5.0;       // sigma_2, on |E - destination|^2
  double weight_energy = 0.1;    // sigma_3, on |u|^2
  double target_variance = 1.5;  // V_0
  Eigen::Vector2d destination{2.0, 0.0};
  double horizon = 5.0;  // T_ode
  int steps = 100;       // M RK4 steps, M+1 output nodes
  Eigen::Vector2d flock_center{-3.0, 0.0};
  double flock_radius = 1.5;
  std::vector<Eigen::Vector2d> dog_start{Eigen::Vector2d{-6.0, 0.0}};

  void validate() const;
  Eigen::Index control_nodes() const { return steps + 1; }
  int control_components() const { return 2 * num_dogs; }
};

Eigen::Vector2d morse_force(const Eigen::Vector2d& r, const MorseParams& m);

/// Initial sheep positions (sunflower layout inside the flock disc).
std::vector<Eigen::Vector2d> initial_flock(const ShepherdParams& params);

struct TrajectoryBundle {
  Eigen::VectorXd times;      // M+1
  Eigen::MatrixXd sheep_pos;  // (M+1) x 2 N_s, [x0 y0 x1 y1 ...] per row
  Eigen::MatrixXd sheep_vel;  // (M+1) x 2 N_s
  Eigen::MatrixXd dog_pos;    // (M+1) x 2 num_dogs
  bool finite = true;         // false once the integration left the floats
};

/// control holds node values, one row per output time, columns
/// [u0_x u0_y (u1_x u1_y)].
TrajectoryBundle simulate(const ShepherdParams& params,
                          const Eigen::MatrixXd& control);

struct FlockStats {
  Eigen::Vector2d center;  // E
  double variance = 0.0;   // V, mean squared distance from E
};

/// positions is a flat [x0 y0 x1 y1 ...] snapshot.
FlockStats flock_stats(const Eigen::VectorXd& positions);

/// Trapezoid-in-time running cost
///   integral of w1 (V - V0)^2 + w2 |E - dest|^2 + w3 |u|^2 dt.
/// Returns +infinity when the simulation blows up.
double reduced_cost(const ShepherdParams& params,
                    const Eigen::MatrixXd& control);

/// Unpack a component-major stacked sample (see sample_stacked) into the
/// (nodes x components) control layout simulate expects.
Eigen::MatrixXd control_from_stacked(const Eigen::VectorXd& stacked,
                                     Eigen::Index nodes, int components);

}  // namespace gpcbo
