#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singspec/core/linear_operator.hpp"
#include "singspec/regularizers/regularizer.hpp"
#include "singspec/solvers/solvers.hpp"

namespace singspec {

enum class Provenance { AnalyticCatalog, NumericalSearch };

/// (u, lambda, p) with ||Ku|| = 1 and p = lambda K*Ku.
struct SingularPair {
  Signal u;
  double lambda = 0.0;
  Signal p;
  Provenance provenance = Provenance::NumericalSearch;
  /// Parameter actually used after snapping to the grid (catalog only).
  std::map<std::string, double> params;
};

struct VerifyOutcome {
  std::optional<SingularPair> pair;
  double lambda = 0.0;
  Certificate certificate;
};

/// Rescales u to ||Ku|| = 1, sets lambda = J(u) and tests lambda K*Ku in dJ(u).
/// Throws KernelElementError when Ku = 0.
VerifyOutcome verify_singular_vector(const LinearOperator& K, const Regularizer& J,
                                     const Signal& u, double tol = 1e-9);

// ---------------------------------------------------------------- catalog

enum class CatalogKind { Ua, Haar, U4, USqrt32 };

struct CatalogParams {
  double a = 0.5;
  int j = 0;
  int k = 0;
};

/// Analytic singular pairs for K = I:
///   Ua      step with jump at a (snapped to a cell boundary), TV1D, 1/sqrt(a(1-a))
///   Haar    psi_{j,k}, TVStar1D, 2^{(j+3)/2} (2 for j = 0)
///   U4      +1 on [1/4, 3/4], -1 elsewhere, TV1D, 4
///   USqrt32 (u4(x) + u4(y)) / sqrt(2), AnisoTV2D, sqrt(32)
SingularPair catalog_make(CatalogKind kind, const CatalogParams& params, const Space& space);

/// The functional each catalog entry belongs to.
Regularizer catalog_regularizer(CatalogKind kind);

/// Piecewise-linear dual primitive q_4 with q_4' = 4 u_4.
double q4_primitive(double x);

// ------------------------------------------------------------ ground state

struct GroundState {
  SingularPair pair;
  double lambda0 = 0.0;
  /// max_v |<u, v>_K| over the kernel basis of J.
  double kernel_residual = 0.0;
  bool heuristic = false;
  std::map<std::string, double> diagnostics;
};

class SearchFailure : public std::runtime_error {
 public:
  SearchFailure(const std::string& what, std::optional<Signal> best, double best_ratio)
      : std::runtime_error(what), best_(std::move(best)), best_ratio_(best_ratio) {}
  const std::optional<Signal>& best() const { return best_; }
  double best_ratio() const { return best_ratio_; }

 private:
  std::optional<Signal> best_;
  double best_ratio_;
};

struct SearchOptions {
  int restarts = 20;
  /// Projected subgradient steps per restart (and per level on grids).
  int steps = 200;
  std::uint64_t seed = 42;
  bool parallel = true;
  /// Inverse power refinement steps after the subgradient phase.
  int polish_steps = 400;
  double verify_tol = 1e-9;
};

/**
 * Multi-start heuristic for min J(u) subject to ||Ku|| = 1, u K-orthogonal to
 * ker J. Each restart runs projected subgradient descent on the Rayleigh
 * quotient, then inverse power steps u <- prox_J(lambda K*Ku), and is kept only
 * if its pair verifies. On 1D grids with K = I restarts run coarse to fine.
 * Returns the smallest verified lambda; the sign is fixed so that the last
 * nonzero entry is positive.
 */
GroundState ground_state_search(const LinearOperator& K, const Regularizer& J,
                                const SearchOptions& options = {});

/// Flips u so that its rightmost nonzero entry is non-negative.
Signal align_sign(const Signal& u);

// ------------------------------------------------------- zero solutions

struct MeyerOutcome {
  bool zero = false;
  Certificate certificate;
};

/// True iff (1/alpha) K*f lies in dJ(0).
MeyerOutcome meyer_zero_test(const LinearOperator& K, const Regularizer& J, const Signal& f,
                             double alpha, double tol = 1e-9);

// --------------------------------------------------- recovery constants

struct RecoveryParams {
  double gamma, lambda, mu, eta, alpha;
  bool clean;
  /// Contrast of the variational solution c u_lambda.
  double c;
  /// Contrast on the plateau of the inverse scale space flow.
  double c_iss;
  double t_star;
  double t_star2;
  double window_lo;
  double window_hi;
  bool snr_ok;
  bool alpha_in_window;
};

/// Clean case when eta is +infinity (mu is then ignored and set to lambda).
RecoveryParams recovery_params(double gamma, double lambda, double mu, double eta, double alpha);

struct NoisyCertificate {
  bool feasible = false;
  double mu = 0.0;
  double eta = 0.0;
  /// K* n.
  Eigen::VectorXd v;
  /// Smallest dual-norm excess seen over the schedule when infeasible.
  double best_excess = std::numeric_limits<double>::infinity();
  int tried = 0;
};

/// Largest eta on the schedule eta_top * 2^{-k} >= floor for which
/// mu K*K e_i + eta K*n certifies in d||.||_1 at e_i, with mu fixed by the
/// i-th entry being one.
NoisyCertificate noisy_certificate_build(const LinearOperator& K, int i, const Signal& noise,
                                         double eta_top = 1e6, double eta_floor = 1e-8,
                                         double tol = 1e-12);

// ---------------------------------------------------------- scale estimates

struct ScaleCoeffs {
  std::vector<double> c;
  double residual = 0.0;
};

ScaleCoeffs scale_coeffs(double a);
ScaleCoeffs scale_coeffs2(double a, double b);

struct ScaleEstimate {
  double a = 0.0, b = 0.0;  // snapped interval
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// |int_a^b (u_hat - u_tilde)| against alpha times the number of step singular
/// vectors used plus their noise pairings; [0, 1] is checked against zero.
ScaleEstimate scale_estimate_check(const Signal& u_hat, const Signal& u_tilde,
                                   const Signal& noise, double alpha, double a, double b,
                                   double tol = 1e-6);

// ------------------------------------------------------------------- bias

struct InequalityRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool pass = true;
};

struct BiasReport {
  std::vector<InequalityRow> rows;
  bool pass = true;
  SolveResult solution;
};

/// Solves the variational problem and checks ||Ku|| <= max(||f|| - alpha l0, 0),
/// ||Ku - f|| >= alpha l0 when ||f|| >= alpha l0, and, when u_tilde is given
/// with f = K u_tilde, J(u) <= J(u_tilde) - alpha l0^2 / 2.
BiasReport bias_check(const LinearOperator& K, const Regularizer& J, const Signal& f, double alpha,
                      double lambda0, const std::optional<Signal>& u_tilde = std::nullopt,
                      double tol = 1e-6, const SolveOptions& options = {});

// ---------------------------------------------------------------- Rayleigh

struct RayleighReport {
  double eps = 0.0;
  Eigen::Matrix2d KtK;
  double lambda0_sweep = 0.0;
  double sweep_angle = 0.0;
  bool e1_accepted = false;
  double e1_lambda = 0.0;
  bool e2_rejected = false;
  double e2_lambda = 0.0;
  double e2_dual_norm = 0.0;
};

/// Two-dimensional l1 example with K*K = [[1, 2 eps], [2 eps, eps]].
RayleighReport rayleigh_counterexample(double eps, int angles = 10000);

// ------------------------------------------------------ structured cases

/// e_i / ||K e_i|| for the column of largest norm (smallest index on ties).
GroundState l1_ground_state(const LinearOperator& K);

/// Point mass on the candidate grid maximizing the discrete integral of
/// k(., z)^2 over the range grid; the operator maps weights at the candidate
/// points to functions on the range grid.
GroundState pointmass_ground_state(const LinearOperator& K);

/// Builds the weights-to-function operator of a kernel k(x, y).
LinearOperator pointmass_operator(const std::function<double(double, double)>& kernel,
                                  const Space& range, int candidates);

/// Top right singular vector of the block with the largest top singular value.
GroundState group_ground_state(const LinearOperator& K, const std::vector<int>& blocks);

/// Rank-one U V^T maximizing ||K(U V^T)|| by alternating power iteration.
GroundState lowrank_ground_state(const LinearOperator& K, int restarts = 8,
                                 std::uint64_t seed = 42);

struct InfConvResult {
  /// 1 or 2 for the component carrying the ground state, 0 on a tie.
  int which = 0;
  double lambda0 = 0.0;
  /// (v, w) with v + w the ground state of the inf-convolution.
  Signal v;
  Signal w;
  /// Largest deviation between the joint solve and ((1 - alpha lambda0) v, (1 - alpha lambda0) w).
  double joint_deviation = 0.0;
  bool verified = false;
};

/// Ground state of the inf-convolution of J1 and J2 from their own ground
/// states, checked by solving the product-space problem with data K(v + w).
InfConvResult infconv_ground_state(const LinearOperator& K, const Regularizer& J1,
                                   const GroundState& g1, const Regularizer& J2,
                                   const GroundState& g2, double alpha = 0.1);

/// min_{v,w} 1/2 ||K(v + w) - f||^2 + alpha (J1(v) + J2(w)) by accelerated
/// proximal gradient.
std::pair<Signal, Signal> infconv_solve(const LinearOperator& K, const Regularizer& J1,
                                        const Regularizer& J2, const Signal& f, double alpha,
                                        int max_iter = 200000, double tol = 1e-13);

}  // namespace singspec
