#include <cmath>

#include "singspec/errors.hpp"
#include "singspec/solvers/solvers.hpp"

namespace singspec {

std::size_t Trajectory::index_at(double t) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] <= t) idx = k;
  return idx;
}

Trajectory bregman_iteration(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, int max_steps, const SolveOptions& options) {
  if (!(alpha > 0.0)) throw RangeError("alpha must be positive");
  if (max_steps < 0) throw RangeError("max_steps must be non-negative");
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.u.push_back(Signal::zeros(K.domain()));
  tr.p.push_back(Signal::zeros(K.domain()));
  // w accumulates residuals so that p^k = K* w^k / alpha.
  Signal w = Signal::zeros(K.range());
  for (int k = 1; k <= max_steps; ++k) {
    SolveResult r = solve_variational(K, J, f + w, alpha, options);
    w = w + f - K.apply(r.u);
    tr.times.push_back(k / alpha);
    tr.u.push_back(std::move(r.u));
    tr.p.push_back(K.adjoint(w) / alpha);
  }
  return tr;
}

Trajectory inverse_scale_space(const LinearOperator& K, const Regularizer& J, const Signal& f,
                               double t_max, double dt, const IssOptions& options) {
  if (!(dt > 0.0)) throw RangeError("time step must be positive");
  if (!(t_max >= 0.0)) throw RangeError("t_max must be non-negative");
  const double alpha = 1.0 / dt;
  const Signal zero = Signal::zeros(K.domain());
  const Signal Kf = K.adjoint(f);
  const auto steps = static_cast<int>(std::floor(t_max / dt + 1e-9));

  Trajectory tr;
  tr.times.push_back(0.0);
  tr.u.push_back(zero);
  tr.p.push_back(zero);
  Signal w = Signal::zeros(K.range());
  bool resting = J.one_homogeneous();
  for (int k = 1; k <= steps; ++k) {
    const double t = k * dt;
    if (resting) {
      if (J.certify(zero, Kf * t, options.event_tol).accepted) {
        w = f * static_cast<double>(k);
        tr.times.push_back(t);
        tr.u.push_back(zero);
        tr.p.push_back(Kf * t);
        continue;
      }
      resting = false;
      tr.jump_times.push_back(t);
    }
    SolveResult r = solve_variational(K, J, f + w, alpha, options.solve);
    w = w + f - K.apply(r.u);
    tr.times.push_back(t);
    tr.u.push_back(std::move(r.u));
    tr.p.push_back(K.adjoint(w) / alpha);
  }
  return tr;
}

ShowalterResult showalter_flow(const LinearOperator& K, const Signal& u_lambda, double lambda,
                               const std::vector<double>& t_grid) {
  if (!K.is_identity()) throw RangeError("the exponential flow is defined for K = I");
  if (!(lambda > 0.0)) throw RangeError("lambda must be positive");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (t_grid[k] < 0.0 || (k > 0 && !(t_grid[k] > t_grid[k - 1])))
      throw RangeError("time grid must be non-negative and strictly increasing");
  }
  ShowalterResult out;
  Signal u = Signal::zeros(u_lambda.space());
  double t_prev = 0.0;
  for (double t : t_grid) {
    const Signal exact = u_lambda * (1.0 - std::exp(-t / lambda));
    out.analytic.times.push_back(t);
    out.analytic.u.push_back(exact);
    out.analytic.p.push_back(exact * lambda);

    u = u + (u_lambda - u) * ((t - t_prev) / lambda);
    t_prev = t;
    out.euler.times.push_back(t);
    out.euler.u.push_back(u);
    out.euler.p.push_back(u * lambda);
  }
  return out;
}

}  // namespace singspec
