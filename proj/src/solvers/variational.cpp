#include <cmath>
#include <limits>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/solvers/solvers.hpp"

namespace singspec {

double variational_objective(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, const Signal& u) {
  const double r = (K.apply(u) - f).norm();
  return 0.5 * r * r + alpha * J.value(u);
}

namespace {

SolveResult make_result(const LinearOperator& K, const Regularizer& J, const Signal& f,
                        double alpha, Signal u, int iterations, double tol) {
  const Signal Ku = K.apply(u);
  Signal p = K.adjoint(f - Ku) / alpha;
  const double residual = (Ku - f).norm();
  const double objective = 0.5 * residual * residual + alpha * J.value(u);
  Certificate cert = J.certify(u, p, tol);
  return SolveResult{std::move(u), std::move(p), residual, objective, iterations, std::move(cert)};
}

}  // namespace

SolveResult solve_variational(const LinearOperator& K, const Regularizer& J, const Signal& f,
                              double alpha, const SolveOptions& options) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be positive");
  require_same_space(f.space(), K.range(), "data vs operator range");
  J.check_space(K.domain());
  const double tol = options.certificate_tol;

  if (K.is_identity()) return make_result(K, J, f, alpha, J.prox(f, alpha), 1, tol);

  const Signal zero = Signal::zeros(K.domain());
  if (J.one_homogeneous() && J.certify(zero, K.adjoint(f) / alpha, tol).accepted)
    return make_result(K, J, f, alpha, zero, 0, tol);

  // Primal-dual iteration for min_u alpha J(u) + F(Ku), F(y) = 1/2 ||y - f||^2.
  const double L = K.norm_estimate(50) * 1.01;
  const double sigma = 0.99 / L, tau = 0.99 / L;
  Signal u = zero, u_bar = zero;
  Signal y = Signal::zeros(K.range());
  SolveResult best = make_result(K, J, f, alpha, zero, 0, tol);
  for (int it = 1; it <= options.max_iterations; ++it) {
    y = (y + K.apply(u_bar) * sigma - f * sigma) / (1.0 + sigma);
    Signal u_next = J.prox(u - K.adjoint(y) * tau, tau * alpha);
    u_bar = u_next * 2.0 - u;
    u = std::move(u_next);
    if (it % options.check_every == 0 || it == options.max_iterations) {
      SolveResult r = make_result(K, J, f, alpha, u, it, tol);
      if (r.certificate.accepted) return r;
      if (r.objective <= best.objective) best = std::move(r);
    }
  }
  throw ConvergenceError("primal-dual iteration did not certify within " +
                             std::to_string(options.max_iterations) + " iterations",
                         std::move(best));
}

}  // namespace singspec
