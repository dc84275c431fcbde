#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "singspec/core/bregman.hpp"
#include "singspec/core/inner.hpp"
#include "singspec/core/linear_operator.hpp"
#include "singspec/errors.hpp"
#include "singspec/regularizers/regularizer.hpp"
#include "singspec/spectral/spectral.hpp"

using namespace singspec;

namespace {

Signal random_signal(const Space& s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(s.size());
  for (auto& x : v) x = g(rng);
  return Signal(s, v);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Space g = Space::grid1d(8);
  CHECK(g.h() * g.n() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.node(0) == doctest::Approx(1.0 / 16));
  CHECK(Space::grid2d(4).size() == 16);
  CHECK(Space::grid2d(4).weight() == doctest::Approx(1.0 / 16));
  CHECK_THROWS_AS(Space::grid1d(1), RangeError);
}

TEST_CASE("signal validation") {
  const Space g = Space::grid1d(4);
  CHECK_THROWS_AS(Signal(g, Eigen::VectorXd::Zero(3)), DimensionError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
  bad[2] = std::nan("");
  CHECK_THROWS_AS(Signal(g, bad), RangeError);
}

TEST_CASE("weighted inner products") {
  const Space g = Space::grid1d(64);
  const Signal one = Signal::constant(g, 1.0);
  CHECK(inner(one, one, true) == doctest::Approx(1.0).epsilon(1e-14));

  const Signal u = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  CHECK(inner(u, u, true) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(inner(u, one, true)) < 1e-14);
  CHECK(inner(one, one, false) == doctest::Approx(64.0));

  CHECK_THROWS_AS(inner(one, Signal::constant(Space::grid1d(32), 1.0), true), DimensionError);
}

TEST_CASE("k_inner") {
  const Space g = Space::grid1d(128);
  const LinearOperator I = LinearOperator::identity(g);
  std::mt19937_64 rng(3);
  const Signal u = random_signal(g, rng), v = random_signal(g, rng);
  CHECK(k_inner(u, v, I) == doctest::Approx(inner(u, v, true)).epsilon(1e-14));

  for (double a : {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875}) {
    const Signal ua = catalog_make(CatalogKind::Ua, {a, 0, 0}, g).u;
    CHECK(k_inner(ua, ua, I) == doctest::Approx(1.0).epsilon(1e-13));
  }

  Eigen::MatrixXd M = Eigen::MatrixXd::Random(5, 8);
  M.colwise().normalize();
  const LinearOperator K = LinearOperator::dense(M);
  for (int j = 0; j < 8; ++j) {
    const Signal e = Signal::unit(K.domain(), j);
    CHECK(k_inner(e, e, K) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(k_inner(Signal::zeros(g), Signal::zeros(g), K), DimensionError);
}

TEST_CASE("adjoint consistency for every operator variant") {
  std::mt19937_64 rng(11);
  std::vector<LinearOperator> ops;
  ops.push_back(LinearOperator::identity(Space::grid1d(32)));
  ops.push_back(LinearOperator::dense(Eigen::MatrixXd::Random(7, 12)));
  ops.push_back(LinearOperator::dense(Eigen::MatrixXd::Random(40, 24), Space::grid1d(24),
                                      Space::grid1d(40)));
  ops.push_back(LinearOperator::dense(Eigen::MatrixXd::Random(16, 9), Space::coordinate(9),
                                      Space::grid2d(4)));
  {
    const Space dom = Space::grid1d(48), ran = Space::grid1d(64);
    Eigen::MatrixXd k(64, 48);
    for (int j = 0; j < 64; ++j)
      for (int i = 0; i < 48; ++i) k(j, i) = std::exp(-std::pow(ran.node(j) - dom.node(i), 2) / 0.02);
    ops.push_back(LinearOperator::sampled_kernel(k, dom, ran));
  }
  for (const auto& K : ops) {
    for (int t = 0; t < 100; ++t) {
      const Signal u = random_signal(K.domain(), rng);
      const Signal v = random_signal(K.range(), rng);
      const double lhs = inner(K.apply(u), v);
      const double rhs = inner(u, K.adjoint(v));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * u.norm() * v.norm());
    }
  }
}

TEST_CASE("dense adjoint is the weighted transpose") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Random(6, 4);
  const Space dom = Space::grid1d(4), ran = Space::grid1d(6);
  const LinearOperator K = LinearOperator::dense(M, dom, ran);
  Eigen::VectorXd y = Eigen::VectorXd::Random(6);
  const Eigen::VectorXd expect = (ran.weight() / dom.weight()) * M.transpose() * y;
  CHECK((K.adjoint(Signal(ran, y)).values() - expect).norm() < 1e-13);
}

TEST_CASE("norm estimate") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Random(10, 6);
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
  CHECK(LinearOperator::dense(M).norm_estimate(200) == doctest::Approx(s).epsilon(1e-6));
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937_64 rng(5);
  const Space g = Space::grid1d(33);
  for (int t = 0; t < 20; ++t) {
    const Signal a = random_signal(g, rng), b = random_signal(g, rng), c = random_signal(g, rng);
    CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-15));
    CHECK(inner(a * 2.5 + b, c) == doctest::Approx(2.5 * inner(a, c) + inner(b, c)).epsilon(1e-12));
  }
}

TEST_CASE("bregman distance examples") {
  const Space g = Space::grid1d(256);
  const SingularPair u4 = catalog_make(CatalogKind::U4, {}, g);
  const Regularizer tv = Regularizer::tv1d();
  CHECK(bregman_distance(tv, u4.u, u4.u, u4.p).value == doctest::Approx(0.0));
  CHECK(std::abs(bregman_distance(tv, u4.u * 2.0, u4.u, u4.p).value) < 1e-12);

  const Space c2 = Space::coordinate(2);
  const Signal e1 = Signal::unit(c2, 0), e2 = Signal::unit(c2, 1);
  const BregmanRecord r = bregman_distance(Regularizer::l1(), e2, e1, e1);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.subgradient.values() == e1.values());

  CHECK_THROWS_AS(bregman_distance(Regularizer::l1(), e2, e1, e1 * 3.0), InvalidSubgradient);
}

TEST_CASE("bregman distance is non-negative") {
  std::mt19937_64 rng(17);
  const Space g = Space::grid1d(24);
  const Space c = Space::coordinate(12);
  const Regularizer regs[] = {Regularizer::tv1d(), Regularizer::tvstar1d(), Regularizer::l1(),
                              Regularizer::group_l1({3, 4, 5}), Regularizer::quadratic()};
  int count = 0;
  for (const auto& J : regs) {
    const Space& s = (J.kind() == RegKind::TV1D || J.kind() == RegKind::TVStar1D) ? g : c;
    for (int t = 0; t < 200; ++t, ++count) {
      const Signal u = random_signal(s, rng), v = random_signal(s, rng);
      const Signal p = J.subgradient(u);
      CHECK(bregman_distance(J, v, u, p).value >= -1e-12);
    }
  }
  CHECK(count == 1000);
}

TEST_CASE("symmetric bregman agrees both ways") {
  const Space g = Space::grid1d(128);
  const SingularPair a = catalog_make(CatalogKind::Ua, {0.25, 0, 0}, g);
  const SingularPair b = catalog_make(CatalogKind::U4, {}, g);
  const Regularizer tv = Regularizer::tv1d();
  const double s = symmetric_bregman(b.u, a.u, b.p, a.p);
  const double d1 = bregman_distance(tv, b.u, a.u, a.p).value;
  const double d2 = bregman_distance(tv, a.u, b.u, b.p).value;
  CHECK(s == doctest::Approx(d1 + d2).epsilon(1e-12));
  CHECK(s == doctest::Approx(symmetric_bregman(a.u, b.u, a.p, b.p)).epsilon(1e-12));
}
