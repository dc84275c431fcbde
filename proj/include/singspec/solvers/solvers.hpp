#pragma once

#include <stdexcept>
#include <vector>

#include "singspec/core/linear_operator.hpp"
#include "singspec/regularizers/regularizer.hpp"

namespace singspec {

struct SolveOptions {
  /// Tolerance at which the recovered subgradient must certify.
  double certificate_tol = 1e-3;
  int max_iterations = 100000;
  /// Iterations between certificate checks of the primal-dual scheme.
  int check_every = 20;
};

struct SolveResult {
  Signal u;
  /// K*(f - Ku) / alpha.
  Signal p;
  double residual = 0.0;
  double objective = 0.0;
  int iterations = 0;
  Certificate certificate;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, SolveResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SolveResult& best() const { return best_; }

 private:
  SolveResult best_;
};

/// 1/2 ||Ku - f||^2 + alpha J(u).
double variational_objective(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, const Signal& u);

/**
 * Minimizes 1/2 ||Ku - f||^2 + alpha J(u).
 *
 * K = identity reduces to the proximal map of J. Otherwise the zero solution is
 * tested first, then a primal-dual iteration runs until the recovered
 * subgradient certifies at options.certificate_tol.
 */
SolveResult solve_variational(const LinearOperator& K, const Regularizer& J, const Signal& f,
                              double alpha, const SolveOptions& options = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<Signal> u;
  std::vector<Signal> p;
  std::vector<double> jump_times;

  std::size_t size() const { return times.size(); }
  /// Index of the last state with time <= t (0 when t precedes all states).
  std::size_t index_at(double t) const;
};

/// Bregman iteration with p^0 = 0 and time stamps t_k = k / alpha.
Trajectory bregman_iteration(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, int max_steps, const SolveOptions& options = {});

struct IssOptions {
  /// Tolerance of the zero-solution test t K*f in dJ(0).
  double event_tol = 1e-9;
  SolveOptions solve;
};

/// Inverse scale space flow as Bregman iteration with alpha = 1/dt, states at
/// t_k = k dt up to t_max. While t_k K*f lies in dJ(0) the state is exactly
/// zero; the first instant where it does not is recorded as a jump time.
Trajectory inverse_scale_space(const LinearOperator& K, const Regularizer& J, const Signal& f,
                               double t_max, double dt, const IssOptions& options = {});

struct ShowalterResult {
  Trajectory analytic;
  Trajectory euler;
};

/// Flow of the quadratic functional (lambda/2)||u||^2 with K = I and data
/// f = u_lambda: lambda u' = f - u, so u(t) = (1 - exp(-t/lambda)) u_lambda.
/// The Euler branch steps between consecutive entries of t_grid.
ShowalterResult showalter_flow(const LinearOperator& K, const Signal& u_lambda, double lambda,
                               const std::vector<double>& t_grid);

}  // namespace singspec
