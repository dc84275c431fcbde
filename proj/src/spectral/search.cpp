#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/spectral/spectral.hpp"

namespace singspec {

Signal align_sign(const Signal& u) {
  const double scale = u.values().cwiseAbs().maxCoeff();
  for (int i = u.size() - 1; i >= 0; --i) {
    if (std::abs(u[i]) > 1e-12 * scale) return u[i] < 0.0 ? -u : u;
  }
  return u;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Problem {
  LinearOperator K;
  Regularizer J;
  std::vector<Signal> kernel;

  Problem(LinearOperator k, Regularizer j)
      : K(std::move(k)), J(std::move(j)), kernel(J.kernel_basis(K.domain())) {}

  Signal deflate(Signal u) const {
    for (const Signal& v : kernel) {
      const double vv = k_inner(v, v, K);
      if (vv > 0.0) u = u - v * (k_inner(u, v, K) / vv);
    }
    return u;
  }

  std::optional<Signal> normalize(const Signal& u) const {
    const double nk = k_norm(u, K);
    if (!(nk > 1e-300)) return std::nullopt;
    return u / nk;
  }

  // Projected subgradient descent on J(u)/||Ku|| over the normalized set.
  Signal descend(Signal u, int steps) const {
    Signal best = u;
    double best_ratio = J.value(u);
    const double s0 = 0.25 * u.norm();
    for (int k = 0; k < steps; ++k) {
      const double Ju = J.value(u);
      const Signal g = J.subgradient(u) - K.adjoint(K.apply(u)) * Ju;
      const double gn = g.norm();
      if (!(gn > 0.0)) break;
      auto next = normalize(deflate(u - g * (s0 / std::sqrt(k + 1.0) / gn)));
      if (!next) break;
      u = *next;
      const double r = J.value(u);
      if (r < best_ratio) {
        best_ratio = r;
        best = u;
      }
    }
    return best;
  }

  // Inverse power steps: prox_J(lambda K*Ku) strictly lowers the quotient
  // unless it vanishes, which certifies a singular vector.
  Signal polish(Signal u, int steps) const {
    for (int k = 0; k < steps; ++k) {
      const double lambda = J.value(u);
      const Signal v = deflate(J.prox(K.adjoint(K.apply(u)) * lambda, 1.0));
      if (k_norm(v, K) <= 1e-14 * std::max(1.0, lambda)) break;
      auto next = normalize(v);
      if (!next) break;
      const double r = J.value(*next);
      if (!(r < lambda)) break;
      u = *next;
      if (lambda - r <= 1e-15 * lambda) break;
    }
    return u;
  }
};

struct RestartResult {
  std::optional<Signal> u;
  double ratio = std::numeric_limits<double>::infinity();
  bool verified = false;
  double lambda = std::numeric_limits<double>::infinity();
};

Signal prolong(const Signal& u, const Space& fine) {
  Eigen::VectorXd v(fine.size());
  for (int i = 0; i < fine.size(); ++i) v[i] = u[i / 2];
  return Signal(fine, v);
}

RestartResult run_restart(const LinearOperator& K, const Regularizer& J, const SearchOptions& opt,
                          std::uint64_t seed) {
  const Space& domain = K.domain();
  std::vector<Space> levels{domain};
  if (K.is_identity() && domain.kind() == SpaceKind::Grid1D) {
    int n = domain.n();
    while (n % 2 == 0 && n / 2 >= 8) {
      n /= 2;
      levels.insert(levels.begin(), Space::grid1d(n));
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(levels.front().size());
  for (auto& e : x) e = gauss(rng);

  RestartResult res;
  std::optional<Signal> u;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const LinearOperator Kl = l + 1 == levels.size() ? K : LinearOperator::identity(levels[l]);
    const Problem prob(Kl, J);
    const Signal start = l == 0 ? Signal(levels[0], x) : prolong(*u, levels[l]);
    u = prob.normalize(prob.deflate(start));
    if (!u) return res;
    u = prob.descend(*u, l == 0 ? opt.steps : opt.steps / 4);
    u = prob.polish(*u, opt.polish_steps);
  }
  res.u = u;
  res.ratio = J.value(*u) / k_norm(*u, K);
  const VerifyOutcome ver = verify_singular_vector(K, J, *u, opt.verify_tol);
  if (ver.pair) {
    res.verified = true;
    res.lambda = ver.lambda;
  }
  return res;
}

}  // namespace

GroundState ground_state_search(const LinearOperator& K, const Regularizer& J,
                                const SearchOptions& options) {
  if (!J.one_homogeneous()) throw RangeError("ground states are defined for one-homogeneous J");
  if (options.restarts < 1) throw RangeError("need at least one restart");
  J.check_space(K.domain());

  std::vector<RestartResult> results(options.restarts);
  if (options.parallel) {
    std::vector<std::future<RestartResult>> jobs;
    for (int r = 0; r < options.restarts; ++r)
      jobs.push_back(std::async(std::launch::async, run_restart, std::cref(K), std::cref(J),
                                std::cref(options), splitmix64(options.seed + r)));
    for (int r = 0; r < options.restarts; ++r) results[r] = jobs[r].get();
  } else {
    for (int r = 0; r < options.restarts; ++r)
      results[r] = run_restart(K, J, options, splitmix64(options.seed + r));
  }

  int best = -1, verified = 0;
  for (int r = 0; r < options.restarts; ++r) {
    if (!results[r].verified) continue;
    ++verified;
    if (best < 0 || results[r].lambda < results[best].lambda) best = r;
  }
  if (best < 0) {
    int closest = -1;
    for (int r = 0; r < options.restarts; ++r)
      if (results[r].u && (closest < 0 || results[r].ratio < results[closest].ratio)) closest = r;
    throw SearchFailure("no restart produced a verified singular pair",
                        closest < 0 ? std::nullopt : results[closest].u,
                        closest < 0 ? std::numeric_limits<double>::infinity()
                                    : results[closest].ratio);
  }

  const Signal u = align_sign(*results[best].u);
  VerifyOutcome ver = verify_singular_vector(K, J, u, options.verify_tol);
  SingularPair pair = *ver.pair;
  pair.provenance = Provenance::NumericalSearch;

  GroundState gs{pair, pair.lambda, 0.0, true, {}};
  for (const Signal& v : J.kernel_basis(K.domain()))
    gs.kernel_residual =
        std::max(gs.kernel_residual, std::abs(k_inner(pair.u, v, K)) / k_norm(v, K));
  gs.diagnostics["verified_restarts"] = verified;
  gs.diagnostics["best_restart"] = best;
  return gs;
}

}  // namespace singspec
