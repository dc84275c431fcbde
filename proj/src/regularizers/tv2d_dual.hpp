#pragma once

#include <Eigen/Dense>

namespace singspec {

/// Sum of absolute forward differences of an n x n row-major image.
double tv2d_raw(const Eigen::VectorXd& u, int n);

/// Forward differences (x then y), n*n entries each; last column/row zero.
Eigen::VectorXd grad2d(const Eigen::VectorXd& u, int n);

/// Transpose of grad2d.
Eigen::VectorXd grad2d_adjoint(const Eigen::VectorXd& z, int n);

struct DivergenceFit {
  Eigen::VectorXd field;
  double field_max = 0.0;
  /// max |D^T z - h p| / h.
  double residual = 0.0;
  bool used_box = false;
};

/// Finds a field z with D^T z = h p: minimum-norm least squares first, then a
/// box-constrained fit when the minimum-norm field leaves [-1, 1].
DivergenceFit fit_divergence(const Eigen::VectorXd& p, int n, double h);

}  // namespace singspec
