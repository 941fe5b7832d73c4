#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gpcbo {

/// Uniform discretization of an interval or of the unit square, bundled with
/// trapezoidal quadrature weights and second-order finite-difference stencils.
///
/// 2D nodes are ordered lexicographically: index p = ix * ny + iy, so x varies
/// slowest. Boundary nodes get interior_mask false; stencil results are zero
/// there (the residual functionals only ever read interior slots).
class Mesh {
 public:
  static Mesh interval(double a, double b, int num_points);
  static Mesh unit_square(int nx, int ny);

  int dim() const { return dim_; }
  Eigen::Index num_points() const { return points_.rows(); }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  /// Quadrature weights with boundary entries zeroed.
  const Eigen::VectorXd& interior_weights() const { return interior_weights_; }
  const std::vector<bool>& interior_mask() const { return interior_; }

  double spacing_x() const { return hx_; }
  double spacing_y() const { return hy_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Eigen::Index node(int ix, int iy) const { return ix * ny_ + iy; }

  /// 1D central second difference (u_{p-1} - 2 u_p + u_{p+1}) / h^2.
  /// Returns a full-length vector, zero at the two endpoints.
  Eigen::VectorXd second_derivative(const Eigen::VectorXd& u) const;

  /// 2D five-point Laplacian; full-length vector, zero on the boundary ring.
  Eigen::VectorXd laplacian(const Eigen::VectorXd& u) const;

 private:
  Mesh() = default;

  int dim_ = 1;
  int nx_ = 0, ny_ = 1;
  double hx_ = 0.0, hy_ = 0.0;
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd interior_weights_;
  std::vector<bool> interior_;
};

}  // namespace gpcbo
