#pragma once

#include <Eigen/Dense>

#include "gpcbo/gp.hpp"
#include "gpcbo/mesh.hpp"

namespace gpcbo {

enum class BvpKind { Harmonic1D, Poisson2D, NonlinearPoisson2D };

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Residual-least-squares formulation of a boundary value problem: the cost
/// integrates the squared PDE residual over interior nodes (trapezoid
/// weights); boundary and any prescribed interior values enter through the
/// GP conditioning data, never through the cost.
struct BvpProblem {
  explicit BvpProblem(Mesh m) : mesh(std::move(m)) {}

  BvpKind kind = BvpKind::Harmonic1D;
  Mesh mesh;
  TrainingData boundary;
  TrainingData constraints;  // empty for the unconstrained variants
  Eigen::VectorXd exact;     // analytic reference on the mesh nodes
  Eigen::VectorXd forcing;   // right-hand side f on the mesh nodes

  double cost(const Eigen::VectorXd& u) const;
  TrainingData training() const {
    return TrainingData::merged(boundary, constraints);
  }
};

/// Harmonic1D wants an interval mesh on [0, pi/2]; the Poisson problems want
/// the unit square. Throws std::invalid_argument on a mismatched mesh.
BvpProblem make_problem(BvpKind kind, const Mesh& mesh, bool constrained);

/// Weighted L2 (full quadrature weights) and max-abs error against a
/// reference on the same mesh.
ErrorNorms error_norms(const Eigen::VectorXd& u, const Eigen::VectorXd& exact,
                       const Mesh& mesh);

}  // namespace gpcbo
