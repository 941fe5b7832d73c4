#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "gpcbo/kernel.hpp"

using gpcbo::eval_kernel;
using gpcbo::gram;
using gpcbo::KernelFamily;
using gpcbo::KernelSpec;

namespace {

KernelSpec matern(double nu, double l = 1.0, double sv = 1.0) {
  return {KernelFamily::MaternHalfInteger, l, nu, sv};
}

KernelSpec squared_exp(double l = 1.0, double sv = 1.0) {
  return {KernelFamily::SquaredExponential, l, 2.5, sv};
}

}  // namespace

TEST_CASE("values at r = 1 match the closed forms") {
  // frozen against a 30-digit arbitrary-precision evaluation, including the
  // general Bessel-function route for the half-integer cases
  CHECK(eval_kernel(squared_exp(), 1.0) ==
        doctest::Approx(0.60653065971263342).epsilon(1e-14));
  CHECK(eval_kernel(matern(0.5), 1.0) ==
        doctest::Approx(0.36787944117144232).epsilon(1e-14));
  CHECK(eval_kernel(matern(1.5), 1.0) ==
        doctest::Approx(0.48335772459650765).epsilon(1e-14));
  CHECK(eval_kernel(matern(2.5), 1.0) ==
        doctest::Approx(0.52399410883182031).epsilon(1e-14));
}

TEST_CASE("k(0) equals the signal variance exactly") {
  CHECK(eval_kernel(matern(0.5, 2.0, 3.25), 0.0) == 3.25);
  CHECK(eval_kernel(matern(1.5, 0.1, 0.5), 0.0) == 0.5);
  CHECK(eval_kernel(squared_exp(4.0, 7.0), 0.0) == 7.0);
}

TEST_CASE("signal variance and length scale rescale the kernel") {
  for (double nu : {0.5, 1.5, 2.5}) {
    const KernelSpec scaled = matern(nu, 0.7, 2.9);
    const KernelSpec unit = matern(nu);
    for (double r : {0.05, 0.3, 1.1, 4.0})
      CHECK(eval_kernel(scaled, r) ==
            doctest::Approx(2.9 * eval_kernel(unit, r / 0.7)).epsilon(1e-14));
  }
  CHECK(eval_kernel(squared_exp(0.7, 2.9), 1.1) ==
        doctest::Approx(2.9 * eval_kernel(squared_exp(), 1.1 / 0.7))
            .epsilon(1e-14));
}

TEST_CASE("kernels decay monotonically and order by smoothness") {
  for (const KernelSpec spec :
       {matern(0.5), matern(1.5), matern(2.5), squared_exp()}) {
    double prev = eval_kernel(spec, 0.0);
    for (double r = 0.1; r < 5.0; r += 0.1) {
      const double k = eval_kernel(spec, r);
      CHECK(k < prev);
      CHECK(k > 0.0);
      prev = k;
    }
  }
  // below one length scale the smoother kernels sit higher...
  for (double r : {0.2, 0.5, 1.0}) {
    CHECK(eval_kernel(matern(0.5), r) < eval_kernel(matern(1.5), r));
    CHECK(eval_kernel(matern(1.5), r) < eval_kernel(matern(2.5), r));
    CHECK(eval_kernel(matern(2.5), r) < eval_kernel(squared_exp(), r));
  }
  // ...and far out the ordering flips: rougher kernels have heavier tails
  CHECK(eval_kernel(squared_exp(), 5.0) < eval_kernel(matern(2.5), 5.0));
  CHECK(eval_kernel(matern(2.5), 5.0) < eval_kernel(matern(1.5), 5.0));
  CHECK(eval_kernel(matern(1.5), 5.0) < eval_kernel(matern(0.5), 5.0));
}

TEST_CASE("small distances stay near the signal variance") {
  for (const KernelSpec spec :
       {matern(0.5), matern(1.5), matern(2.5), squared_exp()})
    CHECK(eval_kernel(spec, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("validate rejects bad hyperparameters") {
  CHECK_THROWS_AS(matern(2.5, -1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(matern(2.5, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(matern(2.5, 1.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_WITH_AS(matern(2.0).validate(),
                       doctest::Contains("smoothness must be one of"),
                       std::invalid_argument);
  CHECK_NOTHROW(matern(0.5).validate());
  CHECK_NOTHROW(squared_exp().validate());
}

TEST_CASE("eval rejects invalid distances") {
  CHECK_THROWS_AS(eval_kernel(matern(1.5), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(
      eval_kernel(matern(1.5), std::numeric_limits<double>::quiet_NaN()),
      std::invalid_argument);
}

TEST_CASE("gram matrices are symmetric and positive semidefinite") {
  Eigen::MatrixXd pts(6, 2);
  pts << 0.0, 0.0, 0.3, 0.1, 0.9, 0.2, 0.4, 0.8, 0.15, 0.55, 0.77, 0.91;
  for (const KernelSpec spec :
       {matern(0.5, 0.4), matern(1.5, 0.4), matern(2.5, 0.4),
        squared_exp(0.4)}) {
    const Eigen::MatrixXd g = gram(spec, pts, pts);
    REQUIRE(g.rows() == 6);
    REQUIRE(g.cols() == 6);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 6; ++i) CHECK(g(i, i) == spec.signal_variance);
    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues();
    CHECK(eigs.minCoeff() > -1e-10 * spec.signal_variance);
  }
}

TEST_CASE("cross gram uses Euclidean distance") {
  Eigen::MatrixXd x(2, 2), y(1, 2);
  x << 0.0, 0.0, 3.0, 4.0;
  y << 0.0, 0.0;
  const KernelSpec spec = matern(1.5);
  const Eigen::MatrixXd g = gram(spec, x, y);
  REQUIRE(g.rows() == 2);
  REQUIRE(g.cols() == 1);
  CHECK(g(0, 0) == spec.signal_variance);
  CHECK(g(1, 0) == doctest::Approx(eval_kernel(spec, 5.0)).epsilon(1e-15));
}

TEST_CASE("gram rejects mismatched dimensions") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 1);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(gram(matern(1.5), a, b), std::invalid_argument);
}
