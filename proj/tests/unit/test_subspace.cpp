#include <doctest.h>

#include <cmath>

#include "disca/errors.hpp"
#include "disca/subspace.hpp"
#include "../oracles.hpp"

using namespace disca;

namespace {

double cross_norm(const MatrixXd& a, const MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(a.transpose() * b).singularValues()(0);
}

bool orthonormal(const Basis& b, double tol = 1e-10) {
  const Index k = b.rank();
  return (b.columns().transpose() * b.columns() - MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_SUITE("subspace") {

TEST_CASE("orthonormalize") {
  Basis a = orthonormalize(MatrixXd(VectorXd::Unit(3, 0) * 2.0));
  REQUIRE(a.rank() == 1);
  CHECK(std::abs(a.columns()(0, 0)) == doctest::Approx(1.0));
  CHECK(a.columns().col(0).tail(2).isZero(1e-15));

  MatrixXd dup(2, 2);
  dup << 1, 1, 0, 0;
  CHECK(orthonormalize(dup).rank() == 1);

  gen::Rng rng(60);
  for (int rep = 0; rep < 20; ++rep) {
    const Basis b = orthonormalize(rng.gaussian(3, 5));
    CHECK(b.rank() == 3);
    CHECK(orthonormal(b));
  }
  CHECK(orthonormalize(MatrixXd::Zero(4, 2)).rank() == 0);
}

TEST_CASE("basis validation") {
  CHECK_THROWS(Basis(MatrixXd::Ones(2, 2)));
  CHECK(Basis::trivial(4).rank() == 0);
  CHECK(Basis::trivial(4).ambient_dim() == 4);
  CHECK(Basis::identity(3).projector().isIdentity(0.0));
}

TEST_CASE("complement") {
  const Basis c = complement(Basis(MatrixXd(VectorXd::Unit(3, 0))));
  CHECK(c.rank() == 2);
  CHECK(c.columns().row(0).isZero(1e-12));
  CHECK(complement(Basis::identity(4)).rank() == 0);
  CHECK(complement(Basis::trivial(4)).rank() == 4);

  gen::Rng rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    const Basis b(rng.orthonormal(5, 2));
    const Basis c5 = complement(b);
    CHECK(c5.rank() == 3);
    CHECK(orthonormal(c5));
    CHECK((c5.columns().transpose() * b.columns()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(subspace_distance(complement(c5), b) <= 1e-10);
  }
}

TEST_CASE("project samples") {
  gen::Rng rng(62);
  const SampleMatrix x(rng.gaussian(10, 3));
  CHECK(project_samples(x, Basis::identity(3)).data() == x.data());
  CHECK(project_samples(x, Basis(MatrixXd(VectorXd::Unit(3, 0)))).data() == x.data().col(0));
  const Basis b(rng.orthonormal(3, 2));
  const MatrixXd p = project_samples(x, b).data();
  for (Index i = 0; i < 10; ++i) CHECK(p.row(i).norm() <= x.data().row(i).norm() + 1e-10);
  CHECK_THROWS_AS(project_samples(x, Basis::identity(4)), DimensionMismatch);
}

TEST_CASE("distance examples") {
  const Basis e1(MatrixXd(VectorXd::Unit(2, 0)));
  const Basis e2(MatrixXd(VectorXd::Unit(2, 1)));
  CHECK(subspace_distance(e1, e1) == doctest::Approx(0.0));
  CHECK(subspace_distance(e1, e2) == doctest::Approx(1.0));
  const Basis diag(MatrixXd(VectorXd::Ones(2) / std::sqrt(2.0)));
  CHECK(subspace_distance(e1, diag) == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-12));
  CHECK_THROWS_AS(subspace_distance(e1, Basis::identity(2)), InvalidComparison);
  CHECK_THROWS_AS(subspace_distance(e1, Basis(MatrixXd(VectorXd::Unit(3, 0)))), InvalidComparison);
}

TEST_CASE("distance matches the principal angle oracle and both cross products") {
  gen::Rng rng(63);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = rng.integer(2, 6), k = rng.integer(1, d - 1);
    const Basis a(rng.orthonormal(d, k)), b(rng.orthonormal(d, k));
    const double dist = subspace_distance(a, b);
    CHECK(std::abs(dist - oracle::subspace_distance(a.columns(), b.columns())) <= 1e-10);
    const double ab = cross_norm(a.columns(), complement(b).columns());
    const double ba = cross_norm(b.columns(), complement(a).columns());
    CHECK(std::abs(ab - ba) <= 1e-10);
    CHECK(std::abs(dist - ab) <= 1e-10);
    CHECK(std::abs(subspace_distance_via_complement(a, b) - ab) <= 1e-10);
  }
}

TEST_CASE("distance is a metric") {
  gen::Rng rng(64);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = rng.integer(2, 6), k = rng.integer(1, d);
    const Basis a(rng.orthonormal(d, k)), b(rng.orthonormal(d, k)), c(rng.orthonormal(d, k));
    CHECK(std::abs(subspace_distance(a, b) - subspace_distance(b, a)) <= 1e-9);
    CHECK(subspace_distance(a, c) <= subspace_distance(a, b) + subspace_distance(b, c) + 1e-9);
    CHECK(subspace_distance(a, b) <= 1.0 + 1e-12);
  }
}

TEST_CASE("varimax") {
  const Basis line(MatrixXd(VectorXd::Ones(3) / std::sqrt(3.0)));
  const Basis r1 = varimax(line);
  CHECK(std::abs(std::abs(r1.columns().col(0).dot(line.columns().col(0))) - 1.0) <= 1e-12);

  gen::Rng rng(65);
  for (int rep = 0; rep < 30; ++rep) {
    const int d = rng.integer(3, 8), k = rng.integer(2, d - 1);
    const Basis b(rng.orthonormal(d, k));
    const Basis r = varimax(b);
    CHECK(orthonormal(r));
    CHECK(subspace_distance(r, b) <= 1e-8);
    CHECK(varimax_criterion(r.columns()) >= varimax_criterion(b.columns()) - 1e-12);
  }

  // A rotated indicator basis rotates back to indicators.
  MatrixXd ind = MatrixXd::Zero(5, 2);
  ind(1, 0) = 1.0;
  ind(3, 1) = 1.0;
  const double t = 0.4;
  Eigen::Matrix2d rot;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const Basis spun = varimax(Basis(ind * rot));
  CHECK(spun.columns().cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spun.columns().cwiseAbs().colwise().sum().maxCoeff() == doctest::Approx(1.0).epsilon(1e-6));
}

}  // TEST_SUITE
