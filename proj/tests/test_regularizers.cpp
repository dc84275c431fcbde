#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/regularizers/regularizer.hpp"
#include "singspec/regularizers/tv_prox.hpp"
#include "singspec/spectral/spectral.hpp"

using namespace singspec;

namespace {

Signal random_signal(const Space& s, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXd v(s.size());
  for (auto& x : v) x = g(rng);
  return Signal(s, v);
}

struct Case {
  Regularizer J;
  Space space;
};

std::vector<Case> all_cases() {
  return {{Regularizer::tv1d(), Space::grid1d(40)},
          {Regularizer::tvstar1d(), Space::grid1d(40)},
          {Regularizer::aniso_tv2d(), Space::grid2d(8)},
          {Regularizer::l1(), Space::coordinate(10)},
          {Regularizer::group_l1({2, 3, 5}), Space::coordinate(10)},
          {Regularizer::nuclear(), Space::matrix(4, 5)},
          {Regularizer::quadratic(), Space::grid1d(40)}};
}

}  // namespace

TEST_CASE("values") {
  const Space g = Space::grid1d(1024);
  CHECK(Regularizer::tv1d().value(Signal::constant(g, 3.0)) == 0.0);
  const Signal ua = catalog_make(CatalogKind::Ua, {0.25, 0, 0}, g).u;
  CHECK(Regularizer::tv1d().value(ua) == doctest::Approx(4.0 / std::sqrt(3.0)).epsilon(1e-12));
  const Signal psi = catalog_make(CatalogKind::Haar, {0.5, 1, 0}, g).u;
  CHECK(Regularizer::tvstar1d().value(psi) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(Regularizer::tv1d().value(catalog_make(CatalogKind::U4, {}, g).u) ==
        doctest::Approx(4.0).epsilon(1e-12));

  Eigen::VectorXd m(6);
  m << 3, 0, 0, 0, 2, 0;  // diag(3, 2) as 2x3
  CHECK(Regularizer::nuclear().value(Signal(Space::matrix(2, 3), m)) == doctest::Approx(5.0));
  Eigen::VectorXd gv(5);
  gv << 3, 4, 1, 2, 2;
  CHECK(Regularizer::group_l1({2, 3}).value(Signal(Space::coordinate(5), gv)) ==
        doctest::Approx(8.0));
  CHECK(Regularizer::quadratic().value(Signal::constant(g, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("space conventions are enforced") {
  CHECK_THROWS_AS(Regularizer::l1().value(Signal::zeros(Space::grid1d(4))), DimensionError);
  CHECK_THROWS_AS(Regularizer::tv1d().value(Signal::zeros(Space::coordinate(4))), DimensionError);
  CHECK_THROWS_AS(Regularizer::nuclear().value(Signal::zeros(Space::coordinate(4))),
                  DimensionError);
  CHECK_THROWS_AS(Regularizer::group_l1({2, 3}).value(Signal::zeros(Space::coordinate(4))),
                  DimensionError);
  CHECK_THROWS_AS(Regularizer::l1().prox(Signal::zeros(Space::coordinate(4)), 0.0), RangeError);
}

TEST_CASE("homogeneity and value at zero") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uc(-10, 10);
  for (const auto& [J, s] : all_cases()) {
    CHECK(J.value(Signal::zeros(s)) == 0.0);
    for (int t = 0; t < 50; ++t) {
      const Signal u = random_signal(s, rng);
      const double c = uc(rng);
      const double v = J.value(u);
      CHECK(v >= 0.0);
      const double expect = J.one_homogeneous() ? std::abs(c) * v : c * c * v;
      CHECK(J.value(u * c) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel is a subspace") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const Space s = Space::grid1d(50);
  for (int t = 0; t < 20; ++t) {
    const Signal u = Signal::constant(s, g(rng)) + Signal::constant(s, g(rng));
    CHECK(Regularizer::tv1d().value(u) == 0.0);
  }
  CHECK(Regularizer::tv1d().kernel_basis(s).size() == 1);
  CHECK(Regularizer::group_l1({2, 2}).kernel_basis(Space::coordinate(4)).empty());
  CHECK(Regularizer::tvstar1d().kernel_basis(s).empty());
}

TEST_CASE("prox closed forms") {
  const Space c = Space::coordinate(2);
  const Signal out = Regularizer::l1().prox(Signal(c, Eigen::Vector2d(2.0, -0.5)), 1.0);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[1] == 0.0);

  const Space g = Space::grid1d(512);
  const Signal u = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  const double gamma = 1.3, alpha = 0.2;
  const Signal w = Regularizer::tv1d().prox(u * gamma, alpha);
  CHECK((w - u * (gamma - 2 * alpha)).norm() < 1e-12);

  // singular value thresholding on diag(3, 1)
  Eigen::VectorXd m(4);
  m << 3, 0, 0, 1;
  const Signal sv = Regularizer::nuclear().prox(Signal(Space::matrix(2, 2), m), 2.0);
  CHECK(sv[0] == doctest::Approx(1.0));
  CHECK(std::abs(sv[3]) < 1e-14);
}

TEST_CASE("clipped ramp") {
  const int n = 1024;
  const Space g = Space::grid1d(n);
  const Signal f = Signal::sample(g, [](double x) { return x - 0.5; });
  const Signal u = Regularizer::tv1d().prox(f, 1.0 / 18);
  double err = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    const double expect = std::clamp(x - 0.5, -1.0 / 6, 1.0 / 6);
    err = std::max(err, std::abs(u[i] - expect));
  }
  CHECK(err <= 2.0 / n);
}

TEST_CASE("1D TV prox matches the dual-box oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ut(0.01, 0.5);
  for (bool boundary : {false, true}) {
    for (int t = 0; t < 25; ++t) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
      std::normal_distribution<double> g;
      for (auto& x : v) x = g(rng);
      const double lam = ut(rng);
      const Eigen::VectorXd mine = tv1d_denoise(v, lam, boundary);
      const Eigen::VectorXd ref = oracle::tv_dual_box(v, lam, boundary);
      CHECK((mine - ref).lpNorm<Eigen::Infinity>() < 1e-8);
    }
  }
}

TEST_CASE("prox optimality and non-expansiveness") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.05, 1.0);
  for (const auto& [J, s] : all_cases()) {
    INFO(J.name());
    for (int t = 0; t < 20; ++t) {
      const Signal v1 = random_signal(s, rng, 2.0), v2 = random_signal(s, rng, 2.0);
      const double tau = ut(rng) * (s.is_grid() ? s.weight() * 4 : 1.0);
      const Signal u1 = J.prox(v1, tau), u2 = J.prox(v2, tau);
      const Certificate cert = J.certify(u1, (v1 - u1) / tau, 1e-6);
      CHECK_MESSAGE(cert.accepted, cert.reason);
      CHECK((u1 - u2).norm() <= (v1 - v2).norm() * (1 + 1e-9));
    }
  }
}

TEST_CASE("certificates") {
  const Space g = Space::grid1d(256);
  const SingularPair u4 = catalog_make(CatalogKind::U4, {}, g);
  CHECK(Regularizer::tv1d().certify(u4.u, u4.p).accepted);
  const Eigen::VectorXd q = running_primitive(u4.p);
  CHECK(q.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));

  const Space c2 = Space::coordinate(2);
  for (double lam : {0.5, 1.0, 5.0, 10.0, 100.0}) {
    const Signal p(c2, Eigen::Vector2d(2 * 0.1 * lam, 0.1 * lam));
    CHECK_FALSE(Regularizer::l1().certify(Signal::unit(c2, 1), p).accepted);
  }

  for (const auto& [J, s] : all_cases()) {
    CHECK(J.certify(Signal::zeros(s), Signal::zeros(s)).accepted);
  }

  // Wrong pairing
  const Certificate bad = Regularizer::tv1d().certify(u4.u, u4.p * 0.5);
  CHECK_FALSE(bad.accepted);
  CHECK(bad.diagnostics.count("pairing_gap") == 1);
}

TEST_CASE("no zero-mean normalized signal has TV below 2") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  const Space s = Space::grid1d(64);
  double lowest = 1e9;
  for (int t = 0; t < 10000; ++t) {
    Eigen::VectorXd v(64);
    for (auto& x : v) x = g(rng);
    std::sort(v.data(), v.data() + v.size());
    v.array() -= v.mean();
    Signal u(s, v);
    u = u / u.norm();
    lowest = std::min(lowest, Regularizer::tv1d().value(u));
  }
  CHECK(lowest >= 2.0 - 1e-6);
}

TEST_CASE("2D prox against a direct chain split") {
  // with all columns equal the 2D problem reduces to the 1D one per row
  const int n = 8;
  Eigen::VectorXd row(n);
  row << 3, 1, 4, 1, 5, 9, 2, 6;
  Eigen::VectorXd img(n * n);
  for (int iy = 0; iy < n; ++iy) img.segment(iy * n, n) = row;
  const Eigen::VectorXd out = tv2d_denoise(img, n, 0.7);
  const Eigen::VectorXd ref = oracle::tv_dual_box(row, 0.7, false);
  for (int iy = 0; iy < n; ++iy) CHECK((out.segment(iy * n, n) - ref).norm() < 1e-7);
}
