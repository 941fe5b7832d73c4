#include "gpcbo/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gpcbo {
namespace {

// Assumes a validated spec and r >= 0.
double eval_unchecked(const KernelSpec& spec, double r) {
  if (r == 0.0) return spec.signal_variance;

  const double s2 = spec.signal_variance;
  const double l = spec.length_scale;
  if (spec.family == KernelFamily::SquaredExponential)
    return s2 * std::exp(-r * r / (2.0 * l * l));

  if (spec.smoothness == 0.5) return s2 * std::exp(-r / l);
  if (spec.smoothness == 1.5) {
    const double z = std::sqrt(3.0) * r / l;
    return s2 * (1.0 + z) * std::exp(-z);
  }
  const double z = std::sqrt(5.0) * r / l;
  return s2 * (1.0 + z + 5.0 * r * r / (3.0 * l * l)) * std::exp(-z);
}

}  // namespace

void KernelSpec::validate() const {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw std::invalid_argument("kernel: length_scale must be positive, got " +
                                std::to_string(length_scale));
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
    throw std::invalid_argument(
        "kernel: signal_variance must be positive, got " +
        std::to_string(signal_variance));
  if (family == KernelFamily::MaternHalfInteger && smoothness != 0.5 &&
      smoothness != 1.5 && smoothness != 2.5)
    throw std::invalid_argument(
        "kernel: smoothness must be one of 0.5, 1.5, 2.5, got " +
        std::to_string(smoothness));
}

double eval_kernel(const KernelSpec& spec, double r) {
  spec.validate();
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("kernel: distance must be finite and >= 0");
  return eval_unchecked(spec, r);
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& x,
                     const Eigen::MatrixXd& y) {
  spec.validate();
  if (x.cols() != y.cols())
    throw std::invalid_argument("gram: point sets have dimensions " +
                                std::to_string(x.cols()) + " and " +
                                std::to_string(y.cols()));
  Eigen::MatrixXd k(x.rows(), y.rows());
  for (Eigen::Index p = 0; p < x.rows(); ++p)
    for (Eigen::Index q = 0; q < y.rows(); ++q)
      k(p, q) = eval_unchecked(spec, (x.row(p) - y.row(q)).norm());
  return k;
}

}  // namespace gpcbo
