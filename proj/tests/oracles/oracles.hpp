#pragma once

// Brute-force reference solvers used only by the tests. None of these call
// into the library's proximal maps or solvers.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// min 1/2 sum (u - v)^2 + lambda (sum |u_{i+1} - u_i| + b (|u_0| + |u_{n-1}|)),
// by accelerated projected gradient on the dual box |z| <= lambda, u = v - D^T z.
inline Eigen::VectorXd tv_dual_box(const Eigen::VectorXd& v, double lambda, bool boundary,
                                   int iters = 400000, double tol = 1e-14) {
  const int n = static_cast<int>(v.size());
  const int m = n - 1 + (boundary ? 2 : 0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i + 1 < n; ++i) {
    D(i, i) = -1.0;
    D(i, i + 1) = 1.0;
  }
  if (boundary) {
    D(n - 1, 0) = 1.0;
    D(n, n - 1) = 1.0;
  }
  const double L = Eigen::JacobiSVD<Eigen::MatrixXd>(D).singularValues()(0);
  const double step = 1.0 / (L * L);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m), y = z, prev = z;
  double t = 1.0;
  for (int k = 0; k < iters; ++k) {
    Eigen::VectorXd g = D * (D.transpose() * y - v);
    z = (y - step * g).cwiseMax(-lambda).cwiseMin(lambda);
    const double tn = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    y = z + ((t - 1) / tn) * (z - prev);
    t = tn;
    if ((z - prev).lpNorm<Eigen::Infinity>() < tol && k > 100) break;
    prev = z;
  }
  return v - D.transpose() * z;
}

// min 1/2 ||M u - f||^2 + alpha ||u||_1 over all sign patterns in {-1, 0, 1}^n.
// Each pattern fixes the support and signs; the reduced problem is a linear
// solve, kept only when it is sign consistent. Rank-deficient supports skipped.
inline Eigen::VectorXd l1_sign_enumeration(const Eigen::MatrixXd& M, const Eigen::VectorXd& f,
                                           double alpha) {
  const int n = static_cast<int>(M.cols());
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u = Eigen::VectorXd::Zero(n);
  for (int code = 0; code < total; ++code) {
    std::vector<int> idx, sgn;
    int c = code;
    for (int i = 0; i < n; ++i, c /= 3) {
      if (c % 3 == 0) continue;
      idx.push_back(i);
      sgn.push_back(c % 3 == 1 ? 1 : -1);
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    if (!idx.empty()) {
      const int s = static_cast<int>(idx.size());
      Eigen::MatrixXd A(M.rows(), s);
      Eigen::VectorXd sv(s);
      for (int k = 0; k < s; ++k) {
        A.col(k) = M.col(idx[k]);
        sv[k] = sgn[k];
      }
      Eigen::MatrixXd G = A.transpose() * A;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
      if (lu.rank() < s) continue;
      Eigen::VectorXd us = lu.solve(A.transpose() * f - alpha * sv);
      bool ok = true;
      for (int k = 0; k < s; ++k) ok = ok && us[k] * sgn[k] > 0;
      if (!ok) continue;
      for (int k = 0; k < s; ++k) u[idx[k]] = us[k];
    }
    const double obj = 0.5 * (M * u - f).squaredNorm() + alpha * u.lpNorm<1>();
    if (obj < best) {
      best = obj;
      best_u = u;
    }
  }
  return best_u;
}

// Largest eigenvalue of a symmetric matrix.
inline double top_eigenvalue(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().maxCoeff();
}

// min ||u||_1 over {u : u^T G u = 1} in the plane, by a dense sweep of angles.
inline double l1_angular_sweep(const Eigen::Matrix2d& G, int angles, double* theta_best = nullptr) {
  const double pi = std::acos(-1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < angles; ++k) {
    const double th = pi * k / angles;
    Eigen::Vector2d d(std::cos(th), std::sin(th));
    const double r = 1.0 / std::sqrt(d.dot(G * d));
    const double val = r * d.lpNorm<1>();
    if (val < best) {
      best = val;
      if (theta_best) *theta_best = th;
    }
  }
  return best;
}

}  // namespace oracle
