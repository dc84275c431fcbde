#include <algorithm>
#include <cmath>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/spectral/spectral.hpp"

namespace singspec {

MeyerOutcome meyer_zero_test(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, double tol) {
  if (!(alpha > 0.0)) throw RangeError("alpha must be positive");
  const Signal zero = Signal::zeros(K.domain());
  MeyerOutcome out;
  out.certificate = J.certify(zero, K.adjoint(f) / alpha, tol);
  out.zero = out.certificate.accepted;
  return out;
}

RecoveryParams recovery_params(double gamma, double lambda, double mu, double eta, double alpha) {
  if (!(gamma > 0.0) || !(lambda > 0.0)) throw RangeError("gamma and lambda must be positive");
  if (!(alpha > 0.0)) throw RangeError("alpha must be positive");
  RecoveryParams r{};
  r.gamma = gamma;
  r.lambda = lambda;
  r.alpha = alpha;
  r.clean = std::isinf(eta);
  if (r.clean) {
    r.mu = lambda;
    r.eta = eta;
    r.c = gamma - alpha * lambda;
    r.c_iss = gamma;
    r.t_star = lambda / gamma;
    r.t_star2 = std::numeric_limits<double>::infinity();
    r.window_lo = 0.0;
    r.window_hi = gamma / lambda;
    r.snr_ok = true;
  } else {
    if (!(mu > 0.0) || !(eta > 0.0)) throw RangeError("mu and eta must be positive");
    r.mu = mu;
    r.eta = eta;
    r.c = gamma - alpha * lambda + (lambda - mu) / eta;
    r.c_iss = gamma + (lambda - mu) / eta;
    r.t_star = lambda * eta / (lambda + gamma * eta - mu);
    r.t_star2 = eta;
    r.window_lo = 1.0 / eta;
    // c > 0 exactly when alpha < gamma/lambda + (lambda - mu)/(lambda eta).
    r.window_hi = gamma / lambda + 1.0 / eta - mu / (lambda * eta);
    r.snr_ok = gamma > mu / eta;
  }
  r.alpha_in_window = alpha >= r.window_lo && alpha < r.window_hi;
  return r;
}

NoisyCertificate noisy_certificate_build(const LinearOperator& K, int i, const Signal& noise,
                                         double eta_top, double eta_floor, double tol) {
  const Space& dom = K.domain();
  if (dom.kind() != SpaceKind::Coordinate) throw DimensionError("l1 certificates need coordinates");
  if (i < 0 || i >= dom.size()) throw RangeError("index out of range");
  if (!(eta_top > 0.0) || !(eta_floor > 0.0) || eta_floor > eta_top)
    throw RangeError("invalid eta schedule");

  const Regularizer J = Regularizer::l1();
  const Signal ei = Signal::unit(dom, i);
  const Signal g = K.adjoint(K.apply(ei));
  const Signal v = K.adjoint(noise);
  NoisyCertificate out;
  out.v = v.values();
  for (double eta = eta_top; eta >= eta_floor; eta *= 0.5) {
    ++out.tried;
    const double mu = (1.0 - eta * v[i]) / g[i];
    const Signal p = g * mu + v * eta;
    const double excess = std::max(p.values().cwiseAbs().maxCoeff() - 1.0, 0.0);
    if (mu > 0.0) out.best_excess = std::min(out.best_excess, excess);
    if (mu > 0.0 && J.certify(ei, p, tol).accepted) {
      out.feasible = true;
      out.mu = mu;
      out.eta = eta;
      return out;
    }
  }
  return out;
}

ScaleCoeffs scale_coeffs(double a) {
  if (!(a > 0.0 && a < 1.0)) throw RangeError("a must lie in (0, 1)");
  ScaleCoeffs s;
  s.c = {a, -std::sqrt(a * (1.0 - a))};
  const double r1 = s.c[0] - std::sqrt((1.0 - a) / a) * s.c[1] - 1.0;
  const double r2 = s.c[0] + std::sqrt(a / (1.0 - a)) * s.c[1];
  s.residual = std::max(std::abs(r1), std::abs(r2));
  return s;
}

ScaleCoeffs scale_coeffs2(double a, double b) {
  if (!(a > 0.0 && a < b && b < 1.0)) throw RangeError("need 0 < a < b < 1");
  ScaleCoeffs s;
  s.c = {b - a, std::sqrt(a * (1.0 - a)), std::sqrt(b * (1.0 - b))};
  const double sa = std::sqrt((1.0 - a) / a), ta = std::sqrt(a / (1.0 - a));
  const double sb = std::sqrt((1.0 - b) / b), tb = std::sqrt(b / (1.0 - b));
  const double r1 = s.c[0] - sa * s.c[1] + sb * s.c[2];
  const double r2 = s.c[0] + ta * s.c[1] + sb * s.c[2] - 1.0;
  const double r3 = s.c[0] + ta * s.c[1] - tb * s.c[2];
  s.residual = std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
  return s;
}

ScaleEstimate scale_estimate_check(const Signal& u_hat, const Signal& u_tilde,
                                   const Signal& noise, double alpha, double a, double b,
                                   double tol) {
  require_same_space(u_hat.space(), u_tilde.space(), "scale estimate");
  require_same_space(u_hat.space(), noise.space(), "scale estimate");
  const Space& sp = u_hat.space();
  if (sp.kind() != SpaceKind::Grid1D) throw DimensionError("scale estimates live on a 1D grid");
  if (!(0.0 <= a && a < b && b <= 1.0)) throw RangeError("need 0 <= a < b <= 1");
  const int n = sp.n();
  const auto ia = static_cast<int>(std::lround(a * n));
  const auto ib = static_cast<int>(std::lround(b * n));
  if (ia >= ib) throw RangeError("interval collapses on this grid");

  ScaleEstimate out;
  out.a = static_cast<double>(ia) / n;
  out.b = static_cast<double>(ib) / n;
  const Eigen::VectorXd d = u_hat.values() - u_tilde.values();
  out.lhs = std::abs(sp.h() * d.segment(ia, ib - ia).sum());

  // Noise pairing with the step singular vector jumping at s.
  auto noise_term = [&](int is) {
    const double s = static_cast<double>(is) / n;
    const SingularPair ua = catalog_make(CatalogKind::Ua, {s, 0, 0}, sp);
    return std::sqrt(s * (1.0 - s)) * std::abs(inner(noise, ua.u));
  };
  // The constant component pairs with the mean of the noise (ROF keeps the mean of f).
  const double mean_term = (out.b - out.a) * std::abs(sp.h() * noise.values().sum());
  const bool left = ia == 0, right = ib == n;
  if (left && right) {
    out.rhs = mean_term;
  } else if (left) {
    out.rhs = alpha + mean_term + noise_term(ib);
  } else if (right) {
    out.rhs = alpha + mean_term + noise_term(ia);
  } else {
    out.rhs = 2.0 * alpha + mean_term + noise_term(ia) + noise_term(ib);
  }
  out.pass = out.lhs <= out.rhs + tol;
  return out;
}

BiasReport bias_check(const LinearOperator& K, const Regularizer& J, const Signal& f, double alpha,
                      double lambda0, const std::optional<Signal>& u_tilde, double tol,
                      const SolveOptions& options) {
  SolveResult sol = solve_variational(K, J, f, alpha, options);
  const double nf = f.norm();
  const double nKu = k_norm(sol.u, K);
  BiasReport rep{{}, true, sol};

  InequalityRow r1{"norm_bound", nKu, std::max(nf - alpha * lambda0, 0.0), true, false};
  r1.pass = r1.lhs <= r1.rhs + tol;
  rep.rows.push_back(r1);

  InequalityRow r2{"residual_bound", sol.residual, alpha * lambda0, nf >= alpha * lambda0, true};
  if (r2.applicable) r2.pass = r2.lhs >= r2.rhs - tol;
  rep.rows.push_back(r2);

  InequalityRow r3{"value_bound", J.value(sol.u), 0.0, false, true};
  if (u_tilde) {
    r3.rhs = J.value(*u_tilde) - 0.5 * alpha * lambda0 * lambda0;
    r3.applicable = nf >= alpha * lambda0;
    if (r3.applicable) r3.pass = r3.lhs <= r3.rhs + tol;
  }
  rep.rows.push_back(r3);

  for (const auto& row : rep.rows) rep.pass = rep.pass && row.pass;
  return rep;
}

RayleighReport rayleigh_counterexample(double eps, int angles) {
  if (!(eps > 0.0 && eps < 0.25)) throw RangeError("eps must lie in (0, 1/4)");
  if (angles < 4) throw RangeError("need at least four sweep angles");
  RayleighReport rep;
  rep.eps = eps;
  rep.KtK << 1.0, 2.0 * eps, 2.0 * eps, eps;
  // K = L^T with L L^T = K*K, so K^T K = K*K.
  const Eigen::Matrix2d Lt = rep.KtK.llt().matrixU();
  const LinearOperator K = LinearOperator::dense(Lt);
  const Regularizer J = Regularizer::l1();

  rep.lambda0_sweep = std::numeric_limits<double>::infinity();
  for (int k = 0; k < angles; ++k) {
    const double th = M_PI * k / angles;
    const Eigen::Vector2d d(std::cos(th), std::sin(th));
    const double val = d.lpNorm<1>() / (Lt * d).norm();
    if (val < rep.lambda0_sweep) {
      rep.lambda0_sweep = val;
      rep.sweep_angle = th;
    }
  }

  const Space sp = Space::coordinate(2);
  const VerifyOutcome v1 = verify_singular_vector(K, J, Signal::unit(sp, 0), 1e-9);
  rep.e1_accepted = v1.pair.has_value();
  rep.e1_lambda = v1.lambda;
  const VerifyOutcome v2 = verify_singular_vector(K, J, Signal::unit(sp, 1), 1e-9);
  rep.e2_rejected = !v2.pair.has_value();
  rep.e2_lambda = v2.lambda;
  rep.e2_dual_norm = v2.certificate.diagnostics.at("info_dual_norm");
  return rep;
}

}  // namespace singspec
