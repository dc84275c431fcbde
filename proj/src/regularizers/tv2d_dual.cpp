#include "tv2d_dual.hpp"

#include <algorithm>
#include <cmath>

namespace singspec {

double tv2d_raw(const Eigen::VectorXd& u, int n) {
  return grad2d(u, n).lpNorm<1>();
}

Eigen::VectorXd grad2d(const Eigen::VectorXd& u, int n) {
  const Eigen::Index N = static_cast<Eigen::Index>(n) * n;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * N);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int i = iy * n + ix;
      if (ix + 1 < n) g[i] = u[i + 1] - u[i];
      if (iy + 1 < n) g[N + i] = u[i + n] - u[i];
    }
  return g;
}

Eigen::VectorXd grad2d_adjoint(const Eigen::VectorXd& z, int n) {
  const Eigen::Index N = static_cast<Eigen::Index>(n) * n;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(N);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int i = iy * n + ix;
      if (ix + 1 < n) {
        d[i] -= z[i];
        d[i + 1] += z[i];
      }
      if (iy + 1 < n) {
        d[i] -= z[N + i];
        d[i + n] += z[N + i];
      }
    }
  return d;
}

DivergenceFit fit_divergence(const Eigen::VectorXd& p, int n, double h) {
  const Eigen::VectorXd b_full = h * p;
  const Eigen::VectorXd b = b_full.array() - b_full.mean();
  auto lap = [n](const Eigen::VectorXd& x) { return grad2d_adjoint(grad2d(x, n), n); };

  // Conjugate gradients on the Neumann Laplacian, right-hand side in its range.
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b, d = r;
  double rr = r.squaredNorm();
  const double stop = 1e-28 * std::max(b.squaredNorm(), 1e-300);
  const int max_it = 10 * n * n + 100;
  for (int it = 0; it < max_it && rr > stop; ++it) {
    const Eigen::VectorXd Ad = lap(d);
    const double dAd = d.dot(Ad);
    if (dAd <= 0.0) break;
    const double a = rr / dAd;
    phi += a * d;
    r -= a * Ad;
    const double rr_new = r.squaredNorm();
    d = r + (rr_new / rr) * d;
    rr = rr_new;
  }

  DivergenceFit fit;
  fit.field = grad2d(phi, n);
  fit.field_max = fit.field.cwiseAbs().maxCoeff();
  fit.residual = (grad2d_adjoint(fit.field, n) - b_full).cwiseAbs().maxCoeff() / h;
  if (fit.field_max <= 1.0 + 1e-12) return fit;

  // Box-constrained fit: accelerated projected gradient, Lipschitz bound 8.
  auto project = [](Eigen::VectorXd z) {
    for (auto& e : z) e = std::clamp(e, -1.0, 1.0);
    return z;
  };
  Eigen::VectorXd z = project(fit.field), y = z, z_prev = z;
  double t = 1.0;
  for (int it = 0; it < 50000; ++it) {
    const Eigen::VectorXd grad = grad2d(grad2d_adjoint(y, n) - b_full, n);
    z_prev = z;
    z = project(y - grad / 8.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = z + ((t - 1.0) / t_next) * (z - z_prev);
    t = t_next;
    if (it % 100 == 0 &&
        (grad2d_adjoint(z, n) - b_full).cwiseAbs().maxCoeff() / h < 1e-12)
      break;
  }
  fit.field = z;
  fit.field_max = z.cwiseAbs().maxCoeff();
  fit.residual = (grad2d_adjoint(z, n) - b_full).cwiseAbs().maxCoeff() / h;
  fit.used_box = true;
  return fit;
}

}  // namespace singspec
