#pragma once

#include <Eigen/Dense>

namespace singspec {

/**
 * Exact solver for
 *   min_u 1/2 sum (u_i - v_i)^2 + lambda * (sum |u_{i+1} - u_i| + b (|u_0| + |u_{n-1}|))
 * with b = 1 when `boundary` is set and b = 0 otherwise.
 *
 * Dynamic programming over the chain: the derivative of each partial cost is a
 * nondecreasing piecewise-linear function, clipped to [-lambda, lambda] when
 * passed to the next node. Linear time up to amortization.
 */
Eigen::VectorXd tv1d_denoise(const Eigen::VectorXd& v, double lambda, bool boundary = false);

/// Anisotropic TV denoising of an n x n row-major image (no grid weights):
/// min 1/2 ||u - v||^2 + lambda sum |forward differences|, Neumann boundary.
/// Dykstra splitting into row and column chains, each solved exactly.
Eigen::VectorXd tv2d_denoise(const Eigen::VectorXd& v, int n, double lambda,
                             double tol = 1e-10, int max_iter = 20000);

}  // namespace singspec
