#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "singspec/core/inner.hpp"
#include "singspec/solvers/solvers.hpp"
#include "singspec/spectral/spectral.hpp"

using namespace singspec;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("identity solves") {
  const Space g = Space::grid1d(512);
  const LinearOperator I = LinearOperator::identity(g);
  const Signal u = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  const SolveResult r = solve_variational(I, Regularizer::tv1d(), u, 0.25);
  CHECK((r.u - u * 0.5).norm() < 1e-12);
  CHECK(r.certificate.accepted);

  for (const auto& J : {Regularizer::tv1d(), Regularizer::tvstar1d(), Regularizer::quadratic()}) {
    const SolveResult z = solve_variational(I, J, Signal::zeros(g), 0.3);
    CHECK(z.u.is_zero());
  }
  CHECK_THROWS(solve_variational(I, Regularizer::tv1d(), u, 0.0));
}

TEST_CASE("noisy cosine at the figure alpha") {
  const int n = 4096;
  const Space g = Space::grid1d(n);
  const Signal u4 = catalog_make(CatalogKind::U4, {}, g).u;
  const Signal f = u4 + Signal::sample(g, [](double x) { return 0.5 * std::cos(38 * kPi * x); });
  const double alpha = (19 * kPi + 2) / (152 * kPi);
  // contrast 1 - 4 alpha + 2 (N(3/4) - N(1/4)) with N the primitive of the noise
  auto N = [](double x) { return 0.5 * std::sin(38 * kPi * x) / (38 * kPi); };
  const double c = 1 - 4 * alpha + 2 * (N(0.75) - N(0.25));
  CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
  const SolveResult r = solve_variational(LinearOperator::identity(g), Regularizer::tv1d(), f, alpha);
  CHECK((r.u - u4 * c).norm() < 5e-3);
}

TEST_CASE("dense l1 solves match sign-pattern enumeration") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> ua(0.05, 0.8);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd M(4, 6);
    for (auto& x : M.reshaped()) x = g(rng);
    Eigen::VectorXd fv(4);
    for (auto& x : fv) x = g(rng);
    const double alpha = ua(rng);
    const LinearOperator K = LinearOperator::dense(M);
    const Regularizer J = Regularizer::l1();
    const Signal f(K.range(), fv);
    SolveOptions opts;
    opts.certificate_tol = 1e-9;
    const SolveResult r = solve_variational(K, J, f, alpha, opts);
    const Eigen::VectorXd ref = oracle::l1_sign_enumeration(M, fv, alpha);
    const double obj_ref = 0.5 * (M * ref - fv).squaredNorm() + alpha * ref.lpNorm<1>();
    CHECK(r.objective - obj_ref <= 1e-8);
    CHECK(r.objective <= variational_objective(K, J, f, alpha, Signal::zeros(K.domain())) + 1e-9);
  }
}

TEST_CASE("meyer dichotomy and monotonicity in alpha") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(5, 7);
  for (auto& x : M.reshaped()) x = g(rng);
  const LinearOperator K = LinearOperator::dense(M);
  const Regularizer J = Regularizer::l1();
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd fv(5);
    for (auto& x : fv) x = g(rng);
    const Signal f(K.range(), fv);
    bool seen_zero = false;
    for (double alpha : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const SolveResult r = solve_variational(K, J, f, alpha);
      const MeyerOutcome m = meyer_zero_test(K, J, f, alpha, 1e-3);
      const bool zero = r.u.values().lpNorm<Eigen::Infinity>() < 1e-6;
      CHECK(zero == m.zero);
      if (seen_zero) CHECK(zero);
      seen_zero = seen_zero || zero;
    }
  }
}

TEST_CASE("general operator with a grid functional") {
  const int n = 48;
  const Space g = Space::grid1d(n);
  Eigen::MatrixXd k(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) k(j, i) = std::exp(-std::pow(g.node(j) - g.node(i), 2) / 0.01);
  const LinearOperator K = LinearOperator::sampled_kernel(k, g, g);
  const Signal f = K.apply(catalog_make(CatalogKind::U4, {}, g).u);
  const SolveResult r = solve_variational(K, Regularizer::tvstar1d(), f, 1e-3);
  CHECK(r.certificate.accepted);
  CHECK(r.objective <= variational_objective(K, Regularizer::tvstar1d(), f, 1e-3, Signal::zeros(g)));
}

TEST_CASE("bregman iteration") {
  const Space g = Space::grid1d(256);
  const LinearOperator I = LinearOperator::identity(g);
  const Regularizer tv = Regularizer::tv1d();
  const Trajectory z = bregman_iteration(I, tv, Signal::zeros(g), 1.0, 5);
  for (const auto& u : z.u) CHECK(u.is_zero());
  CHECK(z.p.front().is_zero());

  const Signal u = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  const double alpha = 10;
  const Trajectory tr = bregman_iteration(I, tv, u, alpha, 40);
  std::size_t first = 0;
  for (std::size_t k = 0; k < tr.size(); ++k)
    if (!tr.u[k].is_zero()) {
      first = k;
      break;
    }
  REQUIRE(first > 0);
  CHECK(tr.times[first] >= 2.0 - 1e-12);
  CHECK(tr.times[first] <= 2.0 + 1 / alpha + 1e-12);
  for (std::size_t k = first + 1; k < tr.size(); ++k) CHECK((tr.u[k] - u).norm() < 1.0 / alpha);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> gn;
  Eigen::MatrixXd M(6, 9);
  for (auto& x : M.reshaped()) x = gn(rng);
  const LinearOperator K = LinearOperator::dense(M);
  Eigen::VectorXd fv(6);
  for (auto& x : fv) x = gn(rng);
  const Signal f(K.range(), fv);
  SolveOptions opts;
  opts.certificate_tol = 1e-8;
  const Trajectory tk = bregman_iteration(K, Regularizer::l1(), f, 2.0, 15, opts);
  for (std::size_t k = 1; k + 1 < tk.size(); ++k) {
    CHECK((K.apply(tk.u[k + 1]) - f).norm() <= (K.apply(tk.u[k]) - f).norm() + 1e-6);
  }
}

TEST_CASE("inverse scale space") {
  const Space g = Space::grid1d(256);
  const LinearOperator I = LinearOperator::identity(g);
  const Regularizer tv = Regularizer::tv1d();
  const double dt = 1e-2;
  const Signal u = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  const Trajectory tr = inverse_scale_space(I, tv, u, 3.0, dt);
  REQUIRE(tr.jump_times.size() >= 1);
  CHECK(std::abs(tr.jump_times.front() - 2.0) <= dt + 1e-12);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.times[k] < 2.0 - dt) CHECK(tr.u[k].is_zero());
    if (tr.times[k] >= 2.0 + 2 * dt) CHECK((tr.u[k] - u).norm() <= 1e-2);
  }
  // discrete flow identity
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    const Signal lhs = tr.p[k + 1] - tr.p[k];
    const Signal rhs = (u - tr.u[k + 1]) * (tr.times[k + 1] - tr.times[k]);
    CHECK((lhs - rhs).values().lpNorm<Eigen::Infinity>() <= 1e-10);
  }
  const Trajectory z = inverse_scale_space(I, tv, Signal::zeros(g), 1.0, 0.1);
  for (const auto& s : z.u) CHECK(s.is_zero());
  CHECK(z.jump_times.empty());
}

TEST_CASE("showalter flow") {
  const Space g = Space::grid1d(128);
  const SingularPair pr = catalog_make(CatalogKind::Ua, {0.25, 0, 0}, g);
  const LinearOperator I = LinearOperator::identity(g);
  std::vector<double> grid{0.0, pr.lambda * std::log(2.0)};
  CHECK(showalter_flow(I, pr.u, pr.lambda, grid).analytic.u[1].norm() ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(showalter_flow(I, pr.u, pr.lambda, grid).analytic.u[0].is_zero());

  double prev_gap = 1e9;
  for (double dt : {0.1, 0.05, 0.025}) {
    std::vector<double> ts;
    for (int k = 0; k * dt <= 20.0 + 1e-12; ++k) ts.push_back(k * dt);
    const ShowalterResult r = showalter_flow(I, pr.u, pr.lambda, ts);
    double gap = 0, prev_dist = 1e9;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      gap = std::max(gap, (r.analytic.u[k] - r.euler.u[k]).norm());
      const double dist = (r.analytic.u[k] - pr.u).norm();
      CHECK(dist <= prev_dist + 1e-15);
      prev_dist = dist;
    }
    CHECK(gap <= dt);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}
