#pragma once

#include <map>
#include <string>
#include <vector>

#include "singspec/core/signal.hpp"

namespace singspec {

enum class RegKind { TV1D, TVStar1D, AnisoTV2D, L1, GroupL1, Nuclear, QuadraticNorm };

/// Outcome of a subdifferential membership test.
struct Certificate {
  bool accepted = false;
  double tol = 0.0;
  std::map<std::string, double> diagnostics;
  /// Short human-readable reason when rejected.
  std::string reason;
};

/**
 * Regularization functional J, optionally multiplied by a positive weight s.
 *
 * TV1D      sum |u_{i+1} - u_i|                      (1D grid, no h factor)
 * TVStar1D  TV1D + |u_0| + |u_{n-1}|                  (1D grid)
 * AnisoTV2D h * sum of |forward differences| in x, y (2D grid, Neumann)
 * L1        sum |u_i|                                (coordinates)
 * GroupL1   sum over blocks of the block 2-norm      (coordinates)
 * Nuclear   sum of singular values                   (coordinates with matrix shape)
 * Quadratic 1/2 ||u||^2 in the signal's own norm     (any space)
 */
class Regularizer {
 public:
  static Regularizer tv1d();
  static Regularizer tvstar1d();
  static Regularizer aniso_tv2d();
  static Regularizer l1();
  static Regularizer group_l1(std::vector<int> block_sizes);
  static Regularizer nuclear();
  static Regularizer quadratic();

  /// Same functional multiplied by s > 0.
  Regularizer scaled(double s) const;

  RegKind kind() const { return kind_; }
  double weight() const { return weight_; }
  const std::vector<int>& blocks() const { return blocks_; }
  bool one_homogeneous() const { return kind_ != RegKind::QuadraticNorm; }
  std::string name() const;

  /// Throws DimensionError when the space does not fit this functional.
  void check_space(const Space& space) const;

  double value(const Signal& u) const;

  /// argmin_w 1/2 ||w - v||^2 + tau J(w) in the norm of v's space.
  Signal prox(const Signal& v, double tau) const;

  /// Tests p in dJ(u) at tolerance tol.
  Certificate certify(const Signal& u, const Signal& p, double tol = 1e-6) const;

  /// One element of dJ(u) (sign-type selection, zero where J is flat).
  Signal subgradient(const Signal& u) const;

  /// Orthonormal basis of the null space {J = 0} (empty when trivial).
  std::vector<Signal> kernel_basis(const Space& space) const;

 private:
  Regularizer(RegKind kind, std::vector<int> blocks, double weight)
      : kind_(kind), blocks_(std::move(blocks)), weight_(weight) {}

  RegKind kind_;
  std::vector<int> blocks_;
  double weight_ = 1.0;
};

/// Parses "tv", "tvstar", "tv2d", "l1", "group:2,3,...", "nuclear", "quad".
Regularizer regularizer_from_name(const std::string& name);

/// Running primitive q_k = h sum_{i<=k} p_i of a 1D grid signal.
Eigen::VectorXd running_primitive(const Signal& p);

}  // namespace singspec
