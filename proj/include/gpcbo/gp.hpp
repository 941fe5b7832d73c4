#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpcbo/kernel.hpp"
#include "gpcbo/mesh.hpp"
#include "gpcbo/rng.hpp"

namespace gpcbo {

/// Conditioning data: boundary values and any prescribed interior values.
/// Points need not coincide with mesh nodes; the cross-Gram handles them.
struct TrainingData {
  Eigen::MatrixXd points;  // n x dim, one row per point
  Eigen::VectorXd values;  // n

  bool empty() const { return points.rows() == 0; }
  Eigen::Index size() const { return points.rows(); }

  /// Throws std::invalid_argument on size mismatch, non-finite entries,
  /// wrong dimension or duplicated points.
  void validate(int dim) const;

  /// Row-wise concatenation of two data sets.
  static TrainingData merged(const TrainingData& a, const TrainingData& b);
};

/// Gaussian measure on a finite evaluation point set, stored as mean,
/// covariance and a lower-triangular factor chol with
/// chol * chol^T = covariance + jitter * I.
///
/// The factor is produced by a semidefinite Cholesky (pivots within
/// 1e-12 * maxdiag of zero are clamped, their columns zeroed), attempted at
/// jitter 0 first and then along the ladder 1e-10 * maxdiag escalating
/// tenfold up to 1e-4 * maxdiag. Every accepted factor is verified to
/// reproduce covariance + jitter * I to 1e-8 relative Frobenius error;
/// otherwise construction throws ConditioningError.
class GaussianMeasure {
 public:
  static GaussianMeasure from_moments(Eigen::VectorXd mean,
                                      Eigen::MatrixXd covariance);

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  double jitter() const { return jitter_; }

 private:
  GaussianMeasure() = default;

  friend GaussianMeasure homogeneous(const GaussianMeasure& measure);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

/// Zero-mean prior with covariance gram(points) + sigma_gp2 * I.
GaussianMeasure build_prior_at(const KernelSpec& spec,
                               const Eigen::MatrixXd& points, double sigma_gp2);
GaussianMeasure build_prior(const KernelSpec& spec, const Mesh& mesh,
                            double sigma_gp2);

/// Posterior conditioned on training data:
///   mean = B C^{-1} y,  cov = A - B C^{-1} B^T
/// with A = gram(points, points) + sigma_gp2 * I, B = gram(points, train),
/// C = gram(train, train). sigma_gp2 is added to C only when noise_on_train
/// is set. Empty training data returns the prior. A singular C after jitter
/// escalation raises ConditioningError naming the closest pair of training
/// points.
GaussianMeasure build_posterior_at(const KernelSpec& spec,
                                   const Eigen::MatrixXd& points,
                                   double sigma_gp2, const TrainingData& data,
                                   bool noise_on_train = false);
GaussianMeasure build_posterior(const KernelSpec& spec, const Mesh& mesh,
                                double sigma_gp2, const TrainingData& data,
                                bool noise_on_train = false);

/// Same covariance structure, mean forced to zero. This is the noise measure
/// the consensus dynamics draw from.
GaussianMeasure homogeneous(const GaussianMeasure& measure);

/// mean + chol * z with z iid standard normal from the stream.
Eigen::VectorXd sample_one(const GaussianMeasure& measure, NormalStream& rng);
std::vector<Eigen::VectorXd> sample(const GaussianMeasure& measure,
                                    NormalStream& rng, int count);

/// `components` independent draws stacked end to end (component-major):
/// slot c * dim + p holds component c at evaluation point p. One factorization
/// serves every component.
Eigen::VectorXd sample_stacked(const GaussianMeasure& measure,
                               NormalStream& rng, int components);

}  // namespace gpcbo
