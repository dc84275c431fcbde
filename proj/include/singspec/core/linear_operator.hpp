#pragma once

#include <Eigen/Dense>

#include "singspec/core/signal.hpp"

namespace singspec {

enum class OperatorKind { Identity, DenseMatrix, SampledKernel };

/**
 * Forward map K between two spaces, with the adjoint taken in the spaces'
 * (possibly quadrature-weighted) inner products.
 *
 * DenseMatrix acts on raw coefficient vectors: (Ku) = M u, and its adjoint is
 * (w_dom / w_range)^{-1} M^T, i.e. the transpose rescaled by quadrature
 * weights. SampledKernel holds samples k(x_j, y_i) and integrates over the
 * domain: (Ku)_j = w_dom sum_i k(x_j, y_i) u_i.
 */
class LinearOperator {
 public:
  static LinearOperator identity(const Space& space);
  static LinearOperator dense(Eigen::MatrixXd matrix);
  static LinearOperator dense(Eigen::MatrixXd matrix, const Space& domain,
                              const Space& range);
  static LinearOperator sampled_kernel(Eigen::MatrixXd samples, const Space& domain,
                                       const Space& range);

  OperatorKind kind() const { return kind_; }
  bool is_identity() const { return kind_ == OperatorKind::Identity; }
  const Space& domain() const { return domain_; }
  const Space& range() const { return range_; }
  /// Underlying coefficient matrix (empty for the identity).
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  Signal apply(const Signal& u) const;
  Signal adjoint(const Signal& v) const;

  /// Operator norm estimated by power iteration on K*K.
  double norm_estimate(int iterations = 50) const;

 private:
  LinearOperator(OperatorKind kind, Eigen::MatrixXd matrix, Space domain, Space range);

  OperatorKind kind_;
  Eigen::MatrixXd matrix_;
  Space domain_;
  Space range_;
};

}  // namespace singspec
