#include "gpcbo/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gpcbo/errors.hpp"

namespace gpcbo {
namespace {

constexpr double kJitterLadder[] = {0.0,  1e-10, 1e-9, 1e-8,
                                    1e-7, 1e-6,  1e-5, 1e-4};

// Lower-triangular factorization of a symmetric positive semidefinite
// matrix. Pivots in [-ptol, ptol] are treated as exact rank deficiencies:
// the diagonal entry and the rest of the column are set to zero. A pivot
// below -ptol means the matrix is indefinite and the attempt fails.
bool psd_cholesky(const Eigen::MatrixXd& a, double ptol, Eigen::MatrixXd& l) {
  const Eigen::Index n = a.rows();
  l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double d = a(k, k) - l.row(k).head(k).squaredNorm();
    if (d > ptol) {
      const double root = std::sqrt(d);
      l(k, k) = root;
      for (Eigen::Index i = k + 1; i < n; ++i)
        l(i, k) = (a(i, k) - l.row(i).head(k).dot(l.row(k).head(k))) / root;
    } else if (d < -ptol) {
      return false;
    }
    // |d| <= ptol: dependent direction, column stays zero.
  }
  return true;
}

struct Factorization {
  Eigen::MatrixXd l;
  double jitter = 0.0;
};

Factorization factor_covariance(const Eigen::MatrixXd& cov) {
  if (!cov.allFinite())
    throw ConditioningError("gp: covariance has non-finite entries");
  const double max_diag = cov.diagonal().maxCoeff();
  Factorization f;
  for (double rel : kJitterLadder) {
    const double jitter = rel * max_diag;
    Eigen::MatrixXd m = cov;
    m.diagonal().array() += jitter;
    if (!psd_cholesky(m, 1e-12 * std::max(max_diag, 0.0), f.l)) continue;
    const double target = m.norm();
    const double residual = (f.l * f.l.transpose() - m).norm();
    if (residual <= 1e-8 * target || (target == 0.0 && residual == 0.0)) {
      f.jitter = jitter;
      return f;
    }
  }
  throw ConditioningError(
      "gp: covariance factorization failed after jitter escalation to 1e-4 * "
      "max diagonal");
}

std::string closest_pair_message(const Eigen::MatrixXd& points) {
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index bi = 0, bj = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  std::ostringstream out;
  out << "training points " << bi << " and " << bj << " (distance " << best
      << ") are the closest pair";
  return out.str();
}

}  // namespace

void TrainingData::validate(int dim) const {
  if (points.rows() != values.size())
    throw std::invalid_argument("training data: " +
                                std::to_string(points.rows()) + " points vs " +
                                std::to_string(values.size()) + " values");
  if (points.rows() > 0 && points.cols() != dim)
    throw std::invalid_argument("training data: points have dimension " +
                                std::to_string(points.cols()) + ", mesh has " +
                                std::to_string(dim));
  if (!points.allFinite() || !values.allFinite())
    throw std::invalid_argument("training data: non-finite entries");
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j)
      if ((points.row(i) - points.row(j)).norm() == 0.0)
        throw std::invalid_argument("training data: points " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j) + " are duplicates");
}

TrainingData TrainingData::merged(const TrainingData& a, const TrainingData& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  TrainingData out;
  out.points.resize(a.points.rows() + b.points.rows(), a.points.cols());
  out.points << a.points, b.points;
  out.values.resize(a.values.size() + b.values.size());
  out.values << a.values, b.values;
  return out;
}

GaussianMeasure GaussianMeasure::from_moments(Eigen::VectorXd mean,
                                              Eigen::MatrixXd covariance) {
  if (covariance.rows() != covariance.cols() ||
      covariance.rows() != mean.size())
    throw std::invalid_argument("gp: moment dimensions disagree");
  if (!mean.allFinite())
    throw std::invalid_argument("gp: mean has non-finite entries");
  GaussianMeasure g;
  Factorization f = factor_covariance(covariance);
  g.mean_ = std::move(mean);
  g.cov_ = std::move(covariance);
  g.chol_ = std::move(f.l);
  g.jitter_ = f.jitter;
  return g;
}

GaussianMeasure build_prior_at(const KernelSpec& spec,
                               const Eigen::MatrixXd& points,
                               double sigma_gp2) {
  spec.validate();
  if (points.rows() == 0)
    throw std::invalid_argument("gp: empty evaluation point set");
  if (!(sigma_gp2 >= 0.0) || !std::isfinite(sigma_gp2))
    throw std::invalid_argument("gp: sigma_gp2 must be finite and >= 0");
  Eigen::MatrixXd a = gram(spec, points, points);
  a.diagonal().array() += sigma_gp2;
  return GaussianMeasure::from_moments(Eigen::VectorXd::Zero(points.rows()),
                                       std::move(a));
}

GaussianMeasure build_prior(const KernelSpec& spec, const Mesh& mesh,
                            double sigma_gp2) {
  return build_prior_at(spec, mesh.points(), sigma_gp2);
}

GaussianMeasure build_posterior_at(const KernelSpec& spec,
                                   const Eigen::MatrixXd& points,
                                   double sigma_gp2, const TrainingData& data,
                                   bool noise_on_train) {
  if (data.empty()) return build_prior_at(spec, points, sigma_gp2);
  spec.validate();
  if (points.rows() == 0)
    throw std::invalid_argument("gp: empty evaluation point set");
  if (!(sigma_gp2 >= 0.0) || !std::isfinite(sigma_gp2))
    throw std::invalid_argument("gp: sigma_gp2 must be finite and >= 0");
  data.validate(static_cast<int>(points.cols()));

  Eigen::MatrixXd a = gram(spec, points, points);
  a.diagonal().array() += sigma_gp2;
  const Eigen::MatrixXd b = gram(spec, points, data.points);
  Eigen::MatrixXd c = gram(spec, data.points, data.points);
  if (noise_on_train) c.diagonal().array() += sigma_gp2;

  const double max_diag = c.diagonal().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool solved = false;
  for (double rel : kJitterLadder) {
    Eigen::MatrixXd cj = c;
    cj.diagonal().array() += rel * max_diag;
    llt.compute(cj);
    if (llt.info() == Eigen::Success) {
      solved = true;
      break;
    }
  }
  if (!solved)
    throw ConditioningError(
        "gp: training covariance is singular after jitter escalation; " +
        closest_pair_message(data.points));

  const Eigen::VectorXd mean = b * llt.solve(data.values);
  Eigen::MatrixXd cov = a - b * llt.solve(b.transpose());
  cov = ((cov + cov.transpose()) / 2.0).eval();
  return GaussianMeasure::from_moments(mean, std::move(cov));
}

GaussianMeasure build_posterior(const KernelSpec& spec, const Mesh& mesh,
                                double sigma_gp2, const TrainingData& data,
                                bool noise_on_train) {
  return build_posterior_at(spec, mesh.points(), sigma_gp2, data,
                            noise_on_train);
}

GaussianMeasure homogeneous(const GaussianMeasure& measure) {
  GaussianMeasure g = measure;
  g.mean_.setZero();
  return g;
}

Eigen::VectorXd sample_one(const GaussianMeasure& measure, NormalStream& rng) {
  return measure.mean() +
         measure.chol() * rng.vector(measure.dim());
}

std::vector<Eigen::VectorXd> sample(const GaussianMeasure& measure,
                                    NormalStream& rng, int count) {
  if (count < 0) throw std::invalid_argument("gp: negative sample count");
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(count);
  for (int i = 0; i < count; ++i) draws.push_back(sample_one(measure, rng));
  return draws;
}

Eigen::VectorXd sample_stacked(const GaussianMeasure& measure,
                               NormalStream& rng, int components) {
  if (components < 1)
    throw std::invalid_argument("gp: components must be >= 1");
  const Eigen::Index p = measure.dim();
  Eigen::VectorXd out(p * components);
  for (int c = 0; c < components; ++c)
    out.segment(c * p, p) = sample_one(measure, rng);
  return out;
}

}  // namespace gpcbo
