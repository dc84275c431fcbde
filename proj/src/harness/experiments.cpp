#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include "singspec/core/inner.hpp"
#include "singspec/harness/harness.hpp"
#include "singspec/solvers/solvers.hpp"
#include "singspec/spectral/spectral.hpp"

namespace singspec {

namespace {

const double kPi = std::acos(-1.0);

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  if (slash != std::string::npos) {
    const double a = std::stod(s.substr(0, slash)), b = std::stod(s.substr(slash + 1), &used);
    return a / b;
  }
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

enum class Cmp { Le, Ge, Eq };

struct Ctx {
  const ExperimentSpec& spec;
  const ExperimentInfo& info;
  ExperimentReport& rep;

  std::string raw(const std::string& key) const {
    if (auto it = spec.params.find(key); it != spec.params.end()) return it->second;
    if (auto it = info.defaults.find(key); it != info.defaults.end()) return it->second;
    throw std::invalid_argument("experiment " + info.id + " has no parameter '" + key + "'");
  }
  double number(const std::string& key) const {
    try {
      return parse_number(raw(key));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("parameter '" + key + "' is not a number: " + raw(key));
    }
  }
  int integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || v < 1) throw std::invalid_argument("parameter '" + key + "' must be a positive integer");
    return static_cast<int>(v);
  }
  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0)) throw std::invalid_argument("parameter '" + key + "' must be positive");
    return v;
  }
  /// "auto" selects the fallback.
  double number_or(const std::string& key, double fallback) const {
    return raw(key) == "auto" ? fallback : positive(key);
  }
  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    return out;
  }

  bool check(const std::string& assertion, const std::string& anchor, double lhs, Cmp cmp,
             double rhs, double tol) {
    bool ok = false;
    switch (cmp) {
      case Cmp::Le: ok = lhs <= rhs + tol; break;
      case Cmp::Ge: ok = lhs >= rhs - tol; break;
      case Cmp::Eq: ok = std::abs(lhs - rhs) <= tol; break;
    }
    rep.rows.push_back({assertion, anchor, ok, lhs, rhs, tol});
    return ok;
  }
  void flag(const std::string& assertion, const std::string& anchor, bool ok) {
    rep.rows.push_back({assertion, anchor, ok, ok ? 1.0 : 0.0, 1.0, 0.0});
  }
  void say(const std::string& line) { rep.summary.push_back(line); }
  void curve(const std::string& name, const Signal& s) {
    Curve c{name, {}, {}};
    for (int i = 0; i < s.size(); ++i) {
      c.x.push_back(s.space().kind() == SpaceKind::Grid1D ? s.space().node(i) : i);
      c.y.push_back(s[i]);
    }
    rep.curves.push_back(std::move(c));
  }
};

double span_deviation(const Signal& u, const Signal& basis) {
  const double nu = u.norm();
  if (nu == 0.0) return 0.0;
  const Signal b = basis / basis.norm();
  return (u - b * inner(u, b)).norm() / nu;
}

// ------------------------------------------------------------------------

void gs_1d_tv(Ctx& c) {
  const int n = c.integer("n");
  const Space g = Space::grid1d(n);
  SearchOptions opts;
  opts.restarts = c.integer("restarts");
  opts.steps = c.integer("steps");
  opts.seed = c.spec.seed;
  const GroundState gs = ground_state_search(LinearOperator::identity(g), Regularizer::tv1d(), opts);
  const Signal ref = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g).u;
  const double err = (gs.pair.u - ref).norm();
  c.check("lambda0 equals 2", "tv1d ground state value 2", gs.lambda0, Cmp::Eq, 2.0, 1e-6);
  c.check("ground state is the centered step", "tv1d ground state u^{1/2}", err, Cmp::Le, 0.0, 1e-2);
  c.check("orthogonal to constants", "ground state lies in the complement of the kernel",
          gs.kernel_residual, Cmp::Le, 0.0, 1e-8);
  c.rep.table_header = {"n", "lambda0", "l2_error"};
  c.rep.table.push_back({double(n), gs.lambda0, err});
  c.curve("ground_state", gs.pair.u);
  c.say("lambda0 = " + num(gs.lambda0));
}

void sv_family_ua(Ctx& c) {
  const Space g = Space::grid1d(c.integer("n"));
  const LinearOperator I = LinearOperator::identity(g);
  c.rep.table_header = {"a", "lambda", "expected"};
  Curve cv{"lambda_vs_a", {}, {}};
  for (double a : c.list("a")) {
    const SingularPair pr = catalog_make(CatalogKind::Ua, {a, 0, 0}, g);
    const double as = pr.params.at("a");
    const VerifyOutcome v = verify_singular_vector(I, Regularizer::tv1d(), pr.u, 1e-9);
    const double expect = 1.0 / std::sqrt(as * (1 - as));
    c.flag("u^a verifies for a = " + num(as), "step functions u^a are singular vectors of TV",
           v.pair.has_value());
    c.check("lambda(a = " + num(as) + ")", "singular value 1/sqrt(a(1-a))", v.lambda, Cmp::Eq,
            expect, 1e-9);
    c.rep.table.push_back({as, v.lambda, expect});
    cv.x.push_back(as);
    cv.y.push_back(v.lambda);
  }
  c.rep.curves.push_back(cv);
}

void haar_basis(Ctx& c) {
  const int jmax = c.integer("jmax");
  const Space g = Space::grid1d(c.integer("n"));
  const LinearOperator I = LinearOperator::identity(g);
  std::vector<Signal> basis;
  c.rep.table_header = {"j", "k", "lambda", "expected"};
  bool exact = true;
  for (int j = 0; j <= jmax; ++j) {
    const int count = j == 0 ? 1 : (1 << (j - 1));
    for (int k = 0; k < count; ++k) {
      const SingularPair pr = catalog_make(CatalogKind::Haar, {0.5, j, k}, g);
      const VerifyOutcome v = verify_singular_vector(I, Regularizer::tvstar1d(), pr.u, 1e-9);
      // 2^{(j+3)/2} for j >= 1, 2 for the constant
      const double expect = j == 0 ? 2.0
                                   : ((j + 3) % 2 == 0 ? std::ldexp(1.0, (j + 3) / 2)
                                                       : std::ldexp(std::sqrt(2.0), (j + 2) / 2));
      exact = exact && v.pair && v.lambda == expect;
      c.check("lambda_{" + std::to_string(j) + "," + std::to_string(k) + "}",
              "Haar singular values 2^{(j+3)/2}", v.lambda, Cmp::Eq, expect, 0.0);
      c.rep.table.push_back({double(j), double(k), v.lambda, expect});
      basis.push_back(pr.u);
    }
  }
  double gram = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      gram = std::max(gram, std::abs(inner(basis[i], basis[j], true) - (i == j ? 1.0 : 0.0)));
  c.check("Gram matrix is the identity", "Haar functions form an orthonormal set", gram, Cmp::Le,
          0.0, 1e-12);
  c.say(std::string("all Haar singular values exact: ") + (exact ? "yes" : "no"));
}

void ramp_rof(Ctx& c) {
  const int n = c.integer("n");
  const double alpha = c.positive("alpha");
  const Space g = Space::grid1d(n);
  const Signal f = Signal::sample(g, [](double x) { return x - 0.5; });
  const SolveResult r = solve_variational(LinearOperator::identity(g), Regularizer::tv1d(), f, alpha);
  const double level = 0.5 - std::sqrt(2 * alpha);
  double linf = 0, area = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    linf = std::max(linf, std::abs(r.u[i] - std::clamp(x - 0.5, -level, level)));
    if (x < 0.5) area += g.h() * (r.u[i] - f[i]);
  }
  c.check("clipped ramp L-inf error", "ROF of the ramp clips at +-(1/2 - sqrt(2 alpha))", linf,
          Cmp::Le, 0.0, 2.0 / n);
  c.check("area of u - f on [0, 1/2]", "clipped area equals alpha", area, Cmp::Eq, alpha, 1e-3);
  c.rep.table_header = {"n", "alpha", "linf_error", "area"};
  c.rep.table.push_back({double(n), alpha, linf, area});
  c.curve("data", f);
  c.curve("solution", r.u);
  c.say("area = " + num(area) + " (alpha = " + num(alpha) + ")");
}

Signal seeded_noise(const Space& g, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gn(0.0, amplitude);
  Eigen::VectorXd v(g.size());
  for (auto& x : v) x = gn(rng);
  return Signal(g, v);
}

void scale_common(Ctx& c, double a, double b, bool two) {
  const int n = c.integer("n");
  const double alpha = c.positive("alpha");
  const Space g = Space::grid1d(n);
  const Signal ut = Signal::sample(g, [](double x) { return x - 0.5; });
  const Signal noise = seeded_noise(g, c.number("noise"), c.spec.seed);
  const Signal u = solve_variational(LinearOperator::identity(g), Regularizer::tv1d(), ut + noise, alpha).u;
  const ScaleEstimate est = scale_estimate_check(u, ut, noise, alpha, a, b);
  if (two) {
    const ScaleCoeffs s = scale_coeffs2(est.a, est.b);
    c.check("c0 = b - a", "two-jump coefficient system", s.c[0], Cmp::Eq, est.b - est.a, 1e-12);
    c.check("system residual", "two-jump coefficient system", s.residual, Cmp::Le, 0.0, 1e-12);
  } else {
    const ScaleCoeffs s = scale_coeffs(est.b);
    c.check("c0 = a", "single-jump coefficient system", s.c[0], Cmp::Eq, est.b, 1e-12);
    c.check("c1 = -sqrt(a(1-a))", "single-jump coefficient system", s.c[1], Cmp::Eq,
            -std::sqrt(est.b * (1 - est.b)), 1e-12);
    c.check("system residual", "single-jump coefficient system", s.residual, Cmp::Le, 0.0, 1e-12);
  }
  c.check("|int (u - u~)| bound", two ? "interval estimate at most 2 alpha plus noise"
                                      : "one-sided estimate at most alpha plus noise",
          est.lhs, Cmp::Le, est.rhs, 1e-6);
  const ScaleEstimate whole = scale_estimate_check(u, ut, noise, alpha, 0.0, 1.0);
  c.check("mean preserved", "ROF preserves the mean", whole.lhs, Cmp::Le, whole.rhs, 1e-6);
  c.rep.table_header = {"a", "b", "alpha", "lhs", "rhs"};
  c.rep.table.push_back({est.a, est.b, alpha, est.lhs, est.rhs});
  c.curve("solution", u);
}

void scale_single(Ctx& c) { scale_common(c, 0.0, c.number("a"), false); }
void scale_interval(Ctx& c) { scale_common(c, c.number("a"), c.number("b"), true); }

void exact_recovery_clean(Ctx& c) {
  const int n = c.integer("n");
  const int trials = c.integer("trials");
  const Space g = Space::grid1d(n);
  const LinearOperator I = LinearOperator::identity(g);
  std::mt19937_64 rng(c.spec.seed);
  std::uniform_real_distribution<double> ug(0.5, 3.0), uf(0.05, 0.95);
  std::vector<std::pair<CatalogKind, CatalogParams>> pairs;
  for (double a : {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875}) pairs.push_back({CatalogKind::Ua, {a, 0, 0}});
  for (int j = 0; j <= 3; ++j)
    for (int k = 0; k < (j == 0 ? 1 : 1 << (j - 1)); ++k) pairs.push_back({CatalogKind::Haar, {0.5, j, k}});
  pairs.push_back({CatalogKind::U4, {}});
  pairs.push_back({CatalogKind::USqrt32, {}});
  const Space g2 = Space::grid2d(c.integer("n2d"));
  c.rep.table_header = {"entry", "gamma", "alpha", "error"};
  double worst = 0;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto& [kind, prm] = pairs[e];
    const Space& s = kind == CatalogKind::USqrt32 ? g2 : g;
    const SingularPair pr = catalog_make(kind, prm, s);
    const LinearOperator K = kind == CatalogKind::USqrt32 ? LinearOperator::identity(g2) : I;
    for (int t = 0; t < trials; ++t) {
      const double gamma = ug(rng), alpha = uf(rng) * gamma / pr.lambda;
      const SolveResult r = solve_variational(K, catalog_regularizer(kind), pr.u * gamma, alpha);
      const double err = (r.u - pr.u * (gamma - alpha * pr.lambda)).norm();
      worst = std::max(worst, err);
      c.rep.table.push_back({double(e), gamma, alpha, err});
    }
  }
  c.check("max error over catalog and (gamma, alpha)", "clean recovery returns (gamma - alpha lambda) u",
          worst, Cmp::Le, 0.0, 1e-3);
  c.say("worst error " + num(worst));
}

void exact_recovery_noisy_cosine(Ctx& c) {
  const int n = c.integer("n");
  const double A = c.number("amplitude");
  const Space g = Space::grid1d(n);
  const Signal u4 = catalog_make(CatalogKind::U4, {}, g).u;
  const Signal f = u4 + Signal::sample(g, [A](double x) { return A * std::cos(38 * kPi * x); });
  const LinearOperator I = LinearOperator::identity(g);
  const std::vector<double> alphas = c.list("alphas");
  c.rep.table_header = {"alpha", "contrast", "expected_contrast", "span_deviation"};
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double alpha = alphas[k];
    const SolveResult r = solve_variational(I, Regularizer::tv1d(), f, alpha);
    const double contrast = inner(r.u, u4);
    const double dev = span_deviation(r.u, u4);
    // 1 - 4 alpha + 2 (N(3/4) - N(1/4)), N the primitive of the noise
    const double expect = 1 - 4 * alpha + 2 * A / (19 * kPi);
    c.rep.table.push_back({alpha, contrast, expect, dev});
    c.curve("solution_" + std::to_string(k), r.u);
    if (k == 0) {
      c.check("u = c u4 at the first alpha", "noisy cosine recovery with contrast 1/2",
              (r.u - u4 * expect).norm(), Cmp::Le, 0.0, 5e-3);
    } else {
      c.check("u leaves span{u4} at alpha = " + num(alpha), "sharpness of the noisy recovery threshold",
              dev, Cmp::Ge, 1e-2, 0.0);
    }
  }
}

void iss_clean(Ctx& c) {
  const int n = c.integer("n");
  const double dt = c.positive("dt"), t_max = c.positive("t_max");
  const Space g = Space::grid1d(n);
  const SingularPair pr = catalog_make(CatalogKind::Ua, {0.5, 0, 0}, g);
  const double gamma = c.positive("gamma");
  const Trajectory tr = inverse_scale_space(LinearOperator::identity(g), Regularizer::tv1d(), pr.u * gamma, t_max, dt);
  const double t_star = pr.lambda / gamma;
  const double jump = tr.jump_times.empty() ? INFINITY : tr.jump_times.front();
  c.check("jump time", "inverse scale space jumps at t* = lambda/gamma", jump, Cmp::Eq, t_star, dt + 1e-12);
  double before = 0, after = 0;
  Curve cv{"distance", {}, {}};
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double d = (tr.u[k] - pr.u * gamma).norm();
    if (tr.times[k] < t_star - dt) before = std::max(before, tr.u[k].norm());
    if (tr.times[k] >= t_star + 0.1 - 1e-12) after = std::max(after, d);
    cv.x.push_back(tr.times[k]);
    cv.y.push_back(tr.u[k].norm());
  }
  c.check("u = 0 before the jump", "inverse scale space stays at zero before t*", before, Cmp::Le, 0.0, 0.0);
  c.check("u = gamma u after the jump", "inverse scale space recovers gamma u_lambda after t*", after,
          Cmp::Le, 0.0, 1e-2);
  c.rep.curves.push_back(cv);
  c.rep.table_header = {"dt", "t_star", "jump", "max_error_after"};
  c.rep.table.push_back({dt, t_star, jump, after});
}

void iss_noisy(Ctx& c) {
  const int n = c.integer("n");
  const double dt = c.positive("dt"), A = c.number("amplitude");
  const double alpha = c.positive("alpha");
  const Space g = Space::grid1d(n);
  const Signal u4 = catalog_make(CatalogKind::U4, {}, g).u;
  const Signal f = u4 + Signal::sample(g, [A](double x) { return A * std::cos(38 * kPi * x); });
  const double eta = 1 / alpha;
  const double mu = 4 - 2 * eta * A / (19 * kPi);
  const RecoveryParams rp = recovery_params(1.0, 4.0, mu, eta, alpha);
  // largest admissible eta: eta times the noise primitive stays inside the dual
  // bound. 38 pi / A in the continuum; on the grid the sampled primitive is used.
  const double eta_cont = 38 * kPi / A;
  const double eta_max = 1.0 / running_primitive(f - u4).cwiseAbs().maxCoeff();
  const double t_max = c.number_or("t_max", eta_max + 1.0);
  const Trajectory tr = inverse_scale_space(LinearOperator::identity(g), Regularizer::tv1d(), f, t_max, dt);
  const double jump = tr.jump_times.empty() ? INFINITY : tr.jump_times.front();
  c.check("t* detected", "noisy inverse scale space jump time t*", jump, Cmp::Eq, rp.t_star, dt + 1e-12);
  double plateau = 0, bias = 0, exit = INFINITY;
  Curve cv{"contrast", {}, {}};
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    if (t >= rp.t_star + dt && t <= rp.t_star2 - dt) {
      plateau = std::max(plateau, (tr.u[k] - u4 * rp.c_iss).norm());
      bias = std::max(bias, (tr.u[k] - u4).norm());
    }
    if (t > rp.t_star + dt && !std::isfinite(exit) && span_deviation(tr.u[k], u4) > 1e-8) exit = t;
    cv.x.push_back(t);
    cv.y.push_back(inner(tr.u[k], u4));
  }
  c.check("u(t) = c u4 on [t* + dt, t** - dt]", "noisy inverse scale space plateau c = gamma + (lambda - mu)/eta",
          plateau, Cmp::Le, 0.0, 1e-2);
  c.check("plateau persists to t** = eta", "plateau holds up to t** = eta", exit, Cmp::Ge, rp.t_star2, dt);
  c.check("plateau exit at the largest admissible eta", "t** = eta for the largest admissible eta", exit,
          Cmp::Eq, eta_max, dt + 1e-9);
  c.rep.curves.push_back(cv);
  c.rep.table_header = {"alpha", "eta", "mu", "t_star", "jump", "t_star2", "exit", "eta_max_grid", "eta_max_continuum", "c_iss", "plateau_error", "distance_to_u4"};
  c.rep.table.push_back({alpha, eta, mu, rp.t_star, jump, rp.t_star2, exit, eta_max, eta_cont, rp.c_iss, plateau, bias});
  c.say("t* = " + num(rp.t_star) + ", detected " + num(jump) + ", c_iss = " + num(rp.c_iss));
}

void showalter(Ctx& c) {
  const Space g = Space::grid1d(c.integer("n"));
  const SingularPair pr = catalog_make(CatalogKind::Ua, {c.number("a"), 0, 0}, g);
  const double dt = c.positive("dt"), t_max = c.positive("t_max");
  std::vector<double> ts;
  for (int k = 0; k * dt <= t_max + 1e-12; ++k) ts.push_back(k * dt);
  const ShowalterResult r = showalter_flow(LinearOperator::identity(g), pr.u, pr.lambda, ts);
  double gap = 0, mono = 0, prev = INFINITY;
  Curve an{"analytic_norm", {}, {}}, eu{"euler_norm", {}, {}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    gap = std::max(gap, (r.analytic.u[k] - r.euler.u[k]).norm());
    const double d = (r.analytic.u[k] - pr.u).norm();
    mono = std::max(mono, d - prev);
    prev = d;
    an.x.push_back(ts[k]);
    an.y.push_back(r.analytic.u[k].norm());
    eu.x.push_back(ts[k]);
    eu.y.push_back(r.euler.u[k].norm());
  }
  const ShowalterResult h = showalter_flow(LinearOperator::identity(g), pr.u, pr.lambda, {0.0, pr.lambda * std::log(2.0)});
  c.check("u(0) = 0", "exponential dynamic starts at zero", r.analytic.u[0].norm(), Cmp::Le, 0.0, 0.0);
  c.check("half-life lambda ln 2", "u(t) = (1 - exp(-t/lambda)) u_lambda", h.analytic.u[1].norm(), Cmp::Eq, 0.5, 1e-6);
  c.check("monotone approach", "u(t) = (1 - exp(-t/lambda)) u_lambda", mono, Cmp::Le, 0.0, 1e-15);
  c.check("Euler gap", "u(t) = (1 - exp(-t/lambda)) u_lambda", gap, Cmp::Le, dt, 0.0);
  c.rep.curves.push_back(an);
  c.rep.curves.push_back(eu);
  c.rep.table_header = {"lambda", "dt", "euler_gap"};
  c.rep.table.push_back({pr.lambda, dt, gap});
}

void bias_bounds(Ctx& c) {
  const int n = c.integer("n"), trials = c.integer("trials");
  const double alpha = c.positive("alpha");
  const Space g = Space::grid1d(n);
  const LinearOperator I = LinearOperator::identity(g);
  std::mt19937_64 rng(c.spec.seed);
  std::normal_distribution<double> gn;
  double w1 = -INFINITY, w2 = -INFINITY, w3 = -INFINITY;
  int used = 0;
  c.rep.table_header = {"trial", "norm_f", "norm_u", "residual", "J_u", "J_f"};
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd v(n);
    for (auto& x : v) x = gn(rng);
    const Signal f(g, v);
    if (f.norm() < 2 * alpha) continue;
    ++used;
    const BiasReport r = bias_check(I, Regularizer::tvstar1d(), f, alpha, 2.0, f);
    const Signal& u = r.solution.u;
    w1 = std::max(w1, u.norm() - (f.norm() - 2 * alpha));
    w2 = std::max(w2, 2 * alpha - (u - f).norm());
    const double ju = Regularizer::tvstar1d().value(u), jf = Regularizer::tvstar1d().value(f);
    w3 = std::max(w3, ju - (jf - 2 * alpha * alpha));
    c.rep.table.push_back({double(t), f.norm(), u.norm(), (u - f).norm(), ju, jf});
  }
  c.check("||u|| <= ||f|| - alpha lambda0", "norm of the solution shrinks by alpha lambda0", w1, Cmp::Le, 0.0, 1e-6);
  c.check("||u - f|| >= alpha lambda0", "residual is at least alpha lambda0", w2, Cmp::Le, 0.0, 1e-6);
  c.check("J(u) <= J(f) - alpha lambda0^2 / 2", "regularizer decreases by alpha lambda0^2 / 2", w3, Cmp::Le, 0.0, 1e-6);
  c.say(std::to_string(used) + " instances checked");

  // sharpness on the ground state
  const Signal u0 = Signal::constant(g, 1.0);
  const BiasReport s = bias_check(I, Regularizer::tvstar1d(), u0 * 1.5, alpha, 2.0);
  c.check("residual equals alpha lambda0 on the ground state", "bias bound is sharp for multiples of the ground state",
          (s.solution.u - u0 * 1.5).norm(), Cmp::Eq, 2 * alpha, 1e-9);
}

void rayleigh_failure(Ctx& c) {
  const double eps = c.positive("eps");
  const RayleighReport r = rayleigh_counterexample(eps, c.integer("angles"));
  c.check("lambda0 from the angular sweep", "ground state +-(1, 0)", r.lambda0_sweep, Cmp::Eq, 1.0, 1e-3);
  c.check("e1 verified with lambda 1", "ground state +-(1, 0)", r.e1_lambda, Cmp::Eq, 1.0, 1e-12);
  c.flag("e1 certificate accepted", "ground state +-(1, 0)", r.e1_accepted);
  c.flag("e2 certificate rejected", "the second minimizer is not a singular vector", r.e2_rejected);
  c.rep.table_header = {"eps", "lambda0_sweep", "sweep_angle", "e1_lambda", "e2_lambda", "e2_dual_norm"};
  c.rep.table.push_back({eps, r.lambda0_sweep, r.sweep_angle, r.e1_lambda, r.e2_lambda, r.e2_dual_norm});
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gn;
  Eigen::MatrixXd M(rows, cols);
  for (auto& x : M.reshaped()) x = gn(rng);
  return M;
}

void l1_ground_state_exp(Ctx& c) {
  std::mt19937_64 rng(c.spec.seed);
  const Eigen::MatrixXd M = gaussian_matrix(c.integer("m"), c.integer("n"), rng);
  const GroundState gs = l1_ground_state(LinearOperator::dense(M));
  Eigen::Index arg;
  const double top = M.colwise().norm().maxCoeff(&arg);
  c.check("lambda0 = 1 / max column norm", "l1 ground state at the column of largest norm", gs.lambda0, Cmp::Eq,
          1.0 / top, 1e-12);
  c.check("selected column", "l1 ground state at the column of largest norm", gs.diagnostics.at("index"), Cmp::Eq,
          double(arg), 0.0);
  Eigen::MatrixXd N = M;
  N.colwise().normalize();
  const GroundState gn = l1_ground_state(LinearOperator::dense(N));
  c.check("normalized columns give lambda0 = 1", "every unit vector is a ground state for normalized columns",
          gn.lambda0, Cmp::Eq, 1.0, 1e-12);
  c.check("tie broken to the smallest index", "every unit vector is a ground state for normalized columns",
          gn.diagnostics.at("index"), Cmp::Eq, 0.0, 0.0);
  c.rep.table_header = {"index", "lambda0", "ties_normalized"};
  c.rep.table.push_back({gs.diagnostics.at("index"), gs.lambda0, gn.diagnostics.at("ties")});
}

void group_lasso_gs(Ctx& c) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(5, 5);
  D.diagonal() << 3, 1, 2, 1.5, 0.5;
  const GroundState gd = group_ground_state(LinearOperator::dense(D), {2, 3});
  c.check("constructed blocks: lambda0 = 1/3", "group ground state in the block with the largest singular value",
          gd.lambda0, Cmp::Eq, 1.0 / 3, 1e-12);
  std::mt19937_64 rng(c.spec.seed);
  const std::vector<int> blocks{2, 3, 4, 3};
  const Eigen::MatrixXd M = gaussian_matrix(10, 12, rng);
  double top = 0;
  int off = 0;
  for (int b : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.middleCols(off, b).transpose() * M.middleCols(off, b));
    top = std::max(top, std::sqrt(es.eigenvalues().maxCoeff()));
    off += b;
  }
  const GroundState gs = group_ground_state(LinearOperator::dense(M), blocks);
  c.check("random blocks: lambda0 vs block enumeration", "group ground state in the block with the largest singular value",
          gs.lambda0, Cmp::Eq, 1.0 / top, 1e-9);
  c.rep.table_header = {"block", "lambda0", "enumerated"};
  c.rep.table.push_back({gs.diagnostics.at("block"), gs.lambda0, 1.0 / top});
}

void lowrank_gs(Ctx& c) {
  const int r = c.integer("rows"), k = c.integer("cols");
  std::mt19937_64 rng(c.spec.seed);
  const Eigen::MatrixXd A = gaussian_matrix(r + 2, r, rng);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero((r + 2) * k, r * k);
  for (int i = 0; i < r + 2; ++i)
    for (int l = 0; l < r; ++l)
      for (int j = 0; j < k; ++j) M(i * k + j, l * k + j) = A(i, l);
  const LinearOperator K = LinearOperator::dense(M, Space::matrix(r, k), Space::coordinate((r + 2) * k));
  const GroundState gs = lowrank_ground_state(K, 8, c.spec.seed);
  const double smax = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
  c.check("lambda0 = 1/sigma_max", "low-rank ground state is of rank one", gs.lambda0, Cmp::Eq, 1.0 / smax, 1e-9);
  const Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>> U(gs.pair.u.values().data(), r, k);
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(U).singularValues();
  c.check("rank one", "low-rank ground state is of rank one", sv(1) / sv(0), Cmp::Le, 0.0, 1e-9);
  c.rep.table_header = {"lambda0", "dense_svd"};
  c.rep.table.push_back({gs.lambda0, 1.0 / smax});
}

void pointmass_gs(Ctx& c) {
  const Space range = Space::grid1d(c.integer("n"));
  const int m = c.integer("candidates");
  const double width = c.positive("width");
  auto kern = [width](double x, double y) { return std::exp(-(x - y) * (x - y) / width); };
  const GroundState gs = pointmass_ground_state(pointmass_operator(kern, range, m));
  double best = -1;
  int arg = 0;
  Curve cv{"energy", {}, {}};
  for (int i = 0; i < m; ++i) {
    const double z = (i + 0.5) / m;
    double s = 0;
    for (int j = 0; j < range.size(); ++j) s += range.h() * std::pow(kern(range.node(j), z), 2);
    if (s > best * (1 + 1e-12)) {
      best = s;
      arg = i;
    }
    cv.x.push_back(z);
    cv.y.push_back(s);
  }
  c.check("support point vs exhaustive sweep", "point-mass ground state c delta_z", gs.diagnostics.at("z"), Cmp::Eq,
          (arg + 0.5) / m, 1e-12);
  c.check("weight c = 1/sqrt(max energy)", "point-mass ground state c delta_z", gs.diagnostics.at("c"), Cmp::Eq,
          1.0 / std::sqrt(best), 1e-9);
  c.rep.curves.push_back(cv);
  c.rep.table_header = {"z", "c", "ties"};
  c.rep.table.push_back({gs.diagnostics.at("z"), gs.diagnostics.at("c"), gs.diagnostics.at("ties")});
}

void infconv_gs(Ctx& c) {
  std::mt19937_64 rng(c.spec.seed);
  const Eigen::MatrixXd M = gaussian_matrix(8, 6, rng);
  const LinearOperator K = LinearOperator::dense(M);
  const double s = c.positive("scale");
  const Regularizer J1 = Regularizer::l1(), J2 = Regularizer::group_l1({3, 3}).scaled(s);
  const GroundState g1 = l1_ground_state(K);
  GroundState g2 = group_ground_state(K, {3, 3});
  g2.lambda0 *= s;
  const InfConvResult r = infconv_ground_state(K, J1, g1, J2, g2, c.positive("alpha"));
  c.check("smaller lambda0 wins", "inf-convolution ground state from the component with smaller lambda0",
          r.lambda0, Cmp::Eq, std::min(g1.lambda0, g2.lambda0), 0.0);
  c.check("joint solve deviation", "inf-convolution ground state from the component with smaller lambda0",
          r.joint_deviation, Cmp::Le, 0.0, 1e-6);
  c.rep.table_header = {"which", "lambda0", "joint_deviation"};
  c.rep.table.push_back({double(r.which), r.lambda0, r.joint_deviation});
}

void aniso_2d_sv(Ctx& c) {
  const Space g = Space::grid2d(c.integer("n"));
  const SingularPair pr = catalog_make(CatalogKind::USqrt32, {}, g);
  const VerifyOutcome v = verify_singular_vector(LinearOperator::identity(g), Regularizer::aniso_tv2d(), pr.u, 1e-9);
  c.flag("u_sqrt32 verifies", "anisotropic TV singular vector with lambda = sqrt(32)", v.pair.has_value());
  c.check("lambda", "anisotropic TV singular vector with lambda = sqrt(32)", v.lambda, Cmp::Eq, std::sqrt(32.0), 1e-9);
  c.rep.table_header = {"n", "lambda", "field_max"};
  const auto it = v.certificate.diagnostics.find("field_max");
  c.rep.table.push_back({double(g.n()), v.lambda, it == v.certificate.diagnostics.end() ? NAN : it->second});
}

using Runner = void (*)(Ctx&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"gs-1d-tv", gs_1d_tv},
      {"sv-family-ua", sv_family_ua},
      {"haar-basis", haar_basis},
      {"ramp-rof", ramp_rof},
      {"scale-single", scale_single},
      {"scale-interval", scale_interval},
      {"exact-recovery-clean", exact_recovery_clean},
      {"exact-recovery-noisy-cosine", exact_recovery_noisy_cosine},
      {"iss-clean", iss_clean},
      {"iss-noisy", iss_noisy},
      {"showalter", showalter},
      {"bias-bounds", bias_bounds},
      {"rayleigh-failure", rayleigh_failure},
      {"l1-ground-state", l1_ground_state_exp},
      {"group-lasso-gs", group_lasso_gs},
      {"lowrank-gs", lowrank_gs},
      {"pointmass-gs", pointmass_gs},
      {"infconv-gs", infconv_gs},
      {"aniso-2d-sv", aniso_2d_sv},
  };
  return table;
}

}  // namespace

bool ExperimentReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const AnchorRow& r) { return r.pass; });
}

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> reg{
      {"gs-1d-tv", "tv1d ground state: lambda0 = 2 at u^{1/2}", {{"n", "1024"}, {"restarts", "20"}, {"steps", "200"}}},
      {"sv-family-ua", "step functions u^a: lambda = 1/sqrt(a(1-a))",
       {{"n", "1024"}, {"a", "0.125,0.25,0.375,0.5,0.625,0.75,0.875"}}},
      {"haar-basis", "Haar functions: orthonormal singular vectors of TV*, lambda = 2^{(j+3)/2}",
       {{"n", "1024"}, {"jmax", "4"}}},
      {"ramp-rof", "ROF of the ramp x - 1/2: clipped ramp with area alpha", {{"n", "1024"}, {"alpha", "1/18"}}},
      {"scale-single", "scale estimate on [0, a]: at most alpha plus noise",
       {{"n", "1024"}, {"alpha", "1/18"}, {"a", "0.5"}, {"noise", "0.02"}}},
      {"scale-interval", "scale estimate on [a, b]: at most 2 alpha plus noise",
       {{"n", "1024"}, {"alpha", "1/18"}, {"a", "0.25"}, {"b", "0.75"}, {"noise", "0.02"}}},
      {"exact-recovery-clean", "clean data gamma u_lambda: solution (gamma - alpha lambda) u_lambda",
       {{"n", "1024"}, {"n2d", "64"}, {"trials", "5"}}},
      {"exact-recovery-noisy-cosine", "u4 plus cosine noise: contrast 1/2 and sharpness of the alpha threshold",
       {{"n", "4096"}, {"amplitude", "0.5"},
        {"alphas", num((19 * kPi + 2) / (152 * kPi)) + "," + num(1 / (75 * kPi)) + "," + num(1 / (74 * kPi))}}},
      {"iss-clean", "inverse scale space on gamma u_lambda: jump at lambda/gamma",
       {{"n", "1024"}, {"dt", "0.01"}, {"t_max", "3"}, {"gamma", "1"}}},
      {"iss-noisy", "inverse scale space on u4 plus cosine noise: plateau between t* and t**",
       {{"n", "1024"}, {"dt", "0.01"}, {"amplitude", "0.5"}, {"alpha", num((19 * kPi + 2) / (152 * kPi))}, {"t_max", "auto"}}},
      {"showalter", "quadratic flow: u(t) = (1 - exp(-t/lambda)) u_lambda",
       {{"n", "256"}, {"a", "0.5"}, {"dt", "0.01"}, {"t_max", "20"}}},
      {"bias-bounds", "bias bounds with the smallest singular value lambda0",
       {{"n", "256"}, {"alpha", "0.05"}, {"trials", "100"}}},
      {"rayleigh-failure", "Rayleigh principle fails for the second singular vector",
       {{"eps", "0.1"}, {"angles", "10000"}}},
      {"l1-ground-state", "l1 ground state: column of largest norm", {{"m", "16"}, {"n", "32"}}},
      {"group-lasso-gs", "joint sparsity ground state: block with the largest singular value", {}},
      {"lowrank-gs", "nuclear norm ground state: rank one", {{"rows", "4"}, {"cols", "5"}}},
      {"pointmass-gs", "support pursuit ground state: point mass c delta_z",
       {{"n", "64"}, {"candidates", "64"}, {"width", "0.02"}}},
      {"infconv-gs", "inf-convolution ground state: component with smaller lambda0",
       {{"scale", "10"}, {"alpha", "0.1"}}},
      {"aniso-2d-sv", "anisotropic 2D TV: u_sqrt32 with lambda = sqrt(32)", {{"n", "64"}}},
  };
  return reg;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SINGSPEC_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("SINGSPEC_SEED is not an integer: ") + s);
    }
  }
  return 42;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  const auto& reg = experiment_registry();
  const auto info = std::find_if(reg.begin(), reg.end(), [&](const ExperimentInfo& e) { return e.id == spec.id; });
  if (info == reg.end()) throw UnknownExperiment("unknown experiment id: " + spec.id);
  for (const auto& [k, v] : spec.params)
    if (!info->defaults.count(k))
      throw std::invalid_argument("experiment " + spec.id + " has no parameter '" + k + "'");

  ExperimentReport rep;
  rep.id = spec.id;
  Ctx ctx{spec, *info, rep};
  const auto t0 = std::chrono::steady_clock::now();
  runners().at(spec.id)(ctx);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!spec.output_dir.empty()) write_report(rep, spec.output_dir);
  return rep;
}

}  // namespace singspec
