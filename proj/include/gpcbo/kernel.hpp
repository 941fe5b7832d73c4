#pragma once

#include <Eigen/Dense>

namespace gpcbo {

enum class KernelFamily { SquaredExponential, MaternHalfInteger };

/// Stationary covariance kernel acting on Euclidean distance.
///
/// Matern smoothness is restricted to the half-integers 0.5, 1.5, 2.5 whose
/// closed forms are evaluated directly; no Bessel functions at runtime.
struct KernelSpec {
  KernelFamily family = KernelFamily::MaternHalfInteger;
  double length_scale = 1.0;
  double smoothness = 2.5;  // ignored for SquaredExponential
  double signal_variance = 1.0;

  /// Throws std::invalid_argument on non-positive scales or unsupported
  /// smoothness values.
  void validate() const;
};

/// k(r) for distance r >= 0. k(0) == signal_variance exactly.
double eval_kernel(const KernelSpec& spec, double r);

/// Cross-covariance of two point sets given as row-per-point matrices with
/// matching column (dimension) counts. Entry (p, q) = k(|x_p - y_q|).
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& y);

}  // namespace gpcbo
