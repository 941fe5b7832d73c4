#include "gpcbo/mesh.hpp"

#include <stdexcept>
#include <string>

namespace gpcbo {

Mesh Mesh::interval(double a, double b, int num_points) {
  if (!(a < b))
    throw std::invalid_argument("mesh: interval needs a < b");
  if (num_points < 3)
    throw std::invalid_argument("mesh: interval needs at least 3 points, got " +
                                std::to_string(num_points));
  Mesh m;
  m.dim_ = 1;
  m.nx_ = num_points;
  m.ny_ = 1;
  m.hx_ = (b - a) / (num_points - 1);
  m.hy_ = 0.0;
  m.points_.resize(num_points, 1);
  for (int i = 0; i < num_points; ++i) m.points_(i, 0) = a + i * m.hx_;
  m.points_(num_points - 1, 0) = b;

  m.weights_ = Eigen::VectorXd::Constant(num_points, m.hx_);
  m.weights_[0] = m.hx_ / 2.0;
  m.weights_[num_points - 1] = m.hx_ / 2.0;

  m.interior_.assign(num_points, true);
  m.interior_.front() = false;
  m.interior_.back() = false;
  m.interior_weights_ = m.weights_;
  m.interior_weights_[0] = 0.0;
  m.interior_weights_[num_points - 1] = 0.0;
  return m;
}

Mesh Mesh::unit_square(int nx, int ny) {
  if (nx < 3 || ny < 3)
    throw std::invalid_argument("mesh: grid needs nx, ny >= 3, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  Mesh m;
  m.dim_ = 2;
  m.nx_ = nx;
  m.ny_ = ny;
  m.hx_ = 1.0 / (nx - 1);
  m.hy_ = 1.0 / (ny - 1);

  Eigen::VectorXd xs(nx), ys(ny);
  for (int i = 0; i < nx; ++i) xs[i] = i * m.hx_;
  xs[nx - 1] = 1.0;
  for (int j = 0; j < ny; ++j) ys[j] = j * m.hy_;
  ys[ny - 1] = 1.0;

  auto axis_weight = [](int i, int n, double h) {
    return (i == 0 || i == n - 1) ? h / 2.0 : h;
  };

  const Eigen::Index count = static_cast<Eigen::Index>(nx) * ny;
  m.points_.resize(count, 2);
  m.weights_.resize(count);
  m.interior_.assign(count, false);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const Eigen::Index p = m.node(ix, iy);
      m.points_(p, 0) = xs[ix];
      m.points_(p, 1) = ys[iy];
      m.weights_[p] =
          axis_weight(ix, nx, m.hx_) * axis_weight(iy, ny, m.hy_);
      m.interior_[p] = ix > 0 && ix < nx - 1 && iy > 0 && iy < ny - 1;
    }
  }
  m.interior_weights_ = m.weights_;
  for (Eigen::Index p = 0; p < count; ++p)
    if (!m.interior_[p]) m.interior_weights_[p] = 0.0;
  return m;
}

Eigen::VectorXd Mesh::second_derivative(const Eigen::VectorXd& u) const {
  if (dim_ != 1)
    throw std::invalid_argument("mesh: second_derivative is 1D only");
  if (u.size() != num_points())
    throw std::invalid_argument(
        "mesh: second_derivative expects " + std::to_string(num_points()) +
        " values, got " + std::to_string(u.size()));
  Eigen::VectorXd d2 = Eigen::VectorXd::Zero(u.size());
  const double inv_h2 = 1.0 / (hx_ * hx_);
  for (Eigen::Index p = 1; p + 1 < u.size(); ++p)
    d2[p] = (u[p - 1] - 2.0 * u[p] + u[p + 1]) * inv_h2;
  return d2;
}

Eigen::VectorXd Mesh::laplacian(const Eigen::VectorXd& u) const {
  if (dim_ != 2)
    throw std::invalid_argument("mesh: laplacian is 2D only");
  if (u.size() != num_points())
    throw std::invalid_argument("mesh: laplacian expects " +
                                std::to_string(num_points()) +
                                " values, got " + std::to_string(u.size()));
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(u.size());
  const double inv_hx2 = 1.0 / (hx_ * hx_);
  const double inv_hy2 = 1.0 / (hy_ * hy_);
  for (int ix = 1; ix < nx_ - 1; ++ix) {
    for (int iy = 1; iy < ny_ - 1; ++iy) {
      const Eigen::Index p = node(ix, iy);
      lap[p] = (u[node(ix - 1, iy)] - 2.0 * u[p] + u[node(ix + 1, iy)]) *
                   inv_hx2 +
               (u[node(ix, iy - 1)] - 2.0 * u[p] + u[node(ix, iy + 1)]) *
                   inv_hy2;
    }
  }
  return lap;
}

}  // namespace gpcbo
