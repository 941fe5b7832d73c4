#include "gpcbo/bvp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpcbo {
namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

Eigen::VectorXd harmonic_exact(const Mesh& mesh) {
  Eigen::VectorXd u(mesh.num_points());
  for (Eigen::Index p = 0; p < mesh.num_points(); ++p)
    u[p] = 2.0 * std::sin(mesh.points()(p, 0));
  return u;
}

Eigen::VectorXd square_exact(const Mesh& mesh) {
  Eigen::VectorXd u(mesh.num_points());
  for (Eigen::Index p = 0; p < mesh.num_points(); ++p) {
    const double x = mesh.points()(p, 0);
    const double y = mesh.points()(p, 1);
    u[p] = 1.0 + x * x + 2.0 * y * y;
  }
  return u;
}

TrainingData boundary_from_exact(const Mesh& mesh, const Eigen::VectorXd& exact) {
  Eigen::Index count = 0;
  for (bool inner : mesh.interior_mask())
    if (!inner) ++count;
  TrainingData data;
  data.points.resize(count, mesh.dim());
  data.values.resize(count);
  Eigen::Index k = 0;
  for (Eigen::Index p = 0; p < mesh.num_points(); ++p) {
    if (mesh.interior_mask()[p]) continue;
    data.points.row(k) = mesh.points().row(p);
    data.values[k] = exact[p];
    ++k;
  }
  return data;
}

TrainingData harmonic_constraints() {
  TrainingData data;
  data.points.resize(2, 1);
  data.points << 1.189997, 1.20586;
  data.values.resize(2);
  data.values << 1.85673, 1.86829;
  return data;
}

TrainingData square_constraints() {
  TrainingData data;
  data.points.resize(4, 2);
  data.points << 0.72413793, 0.72413793,  //
      0.75862069, 0.72413793,             //
      0.72413793, 0.75862069,             //
      0.75862069, 0.75862069;
  data.values.resize(4);
  data.values << 2.31581451, 2.36183115, 2.40784780, 2.45386445;
  return data;
}

}  // namespace

double BvpProblem::cost(const Eigen::VectorXd& u) const {
  if (u.size() != mesh.num_points())
    throw std::invalid_argument("bvp: cost expects one value per mesh node");
  Eigen::VectorXd residual;
  switch (kind) {
    case BvpKind::Harmonic1D:
      residual = mesh.second_derivative(u) + u;
      break;
    case BvpKind::Poisson2D:
      residual = mesh.laplacian(u).array() - 6.0;
      break;
    case BvpKind::NonlinearPoisson2D:
      residual = -mesh.laplacian(u).array() + u.array().cube() -
                 forcing.array();
      break;
  }
  return (residual.array().square() * mesh.interior_weights().array()).sum();
}

BvpProblem make_problem(BvpKind kind, const Mesh& mesh, bool constrained) {
  BvpProblem problem(mesh);
  problem.kind = kind;

  if (kind == BvpKind::Harmonic1D) {
    if (mesh.dim() != 1 || !near(mesh.points()(0, 0), 0.0) ||
        !near(mesh.points()(mesh.num_points() - 1, 0), std::numbers::pi / 2))
      throw std::invalid_argument(
          "bvp: Harmonic1D needs an interval mesh on [0, pi/2]");
    problem.exact = harmonic_exact(mesh);
    TrainingData data;
    data.points.resize(2, 1);
    data.points << 0.0, std::numbers::pi / 2;
    data.values.resize(2);
    data.values << 0.0, 2.0;
    problem.boundary = data;
    if (constrained) problem.constraints = harmonic_constraints();
    return problem;
  }

  if (mesh.dim() != 2)
    throw std::invalid_argument("bvp: the Poisson problems need a 2D mesh");
  problem.exact = square_exact(mesh);
  problem.boundary = boundary_from_exact(mesh, problem.exact);
  if (constrained) problem.constraints = square_constraints();
  if (kind == BvpKind::NonlinearPoisson2D) {
    // f chosen so the analytic reference solves -lap(u) + u^3 = f
    problem.forcing = problem.exact.array().cube() - 6.0;
  }
  return problem;
}

ErrorNorms error_norms(const Eigen::VectorXd& u, const Eigen::VectorXd& exact,
                       const Mesh& mesh) {
  if (u.size() != mesh.num_points() || exact.size() != mesh.num_points())
    throw std::invalid_argument("bvp: error norms need per-node values");
  const Eigen::VectorXd diff = u - exact;
  ErrorNorms norms;
  norms.l2 = std::sqrt(
      (diff.array().square() * mesh.quad_weights().array()).sum());
  norms.linf = diff.cwiseAbs().maxCoeff();
  return norms;
}

}  // namespace gpcbo
