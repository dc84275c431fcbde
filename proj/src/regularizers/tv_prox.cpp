#include "singspec/regularizers/tv_prox.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace singspec {

namespace {

struct Knot {
  double x;
  double da;
  double db;
};

// Derivative of the partial cost: affine (aL, bL) left of all knots, each knot
// adds (da, db) to the affine piece on its right.
struct PiecewiseDerivative {
  std::deque<Knot> knots;
  double aL = 0.0, bL = 0.0, aR = 0.0, bR = 0.0;

  double clip_left(double level) {
    double a = aL, b = bL, x;
    for (;;) {
      if (knots.empty()) {
        x = (level - b) / a;
        break;
      }
      const Knot kn = knots.front();
      if (a * kn.x + b >= level) {
        x = (level - b) / a;
        break;
      }
      a += kn.da;
      b += kn.db;
      knots.pop_front();
      if (a * kn.x + b >= level) {
        x = kn.x;
        break;
      }
    }
    knots.push_front({x, a, b - level});
    aL = 0.0;
    bL = level;
    return x;
  }

  double clip_right(double level) {
    double a = aR, b = bR, x;
    for (;;) {
      if (knots.empty()) {
        x = (level - b) / a;
        break;
      }
      const Knot kn = knots.back();
      if (a * kn.x + b <= level) {
        x = (level - b) / a;
        break;
      }
      a -= kn.da;
      b -= kn.db;
      knots.pop_back();
      if (a * kn.x + b <= level) {
        x = kn.x;
        break;
      }
    }
    knots.push_back({x, -a, level - b});
    aR = 0.0;
    bR = level;
    return x;
  }

  // Smallest x with derivative >= level.
  double root(double level) const {
    double a = aL, b = bL;
    for (const Knot& kn : knots) {
      if (a * kn.x + b >= level) return (level - b) / a;
      a += kn.da;
      b += kn.db;
      if (a * kn.x + b >= level) return kn.x;
    }
    return (level - b) / a;
  }

  void add_data(double v) {
    aL += 1.0;
    bL -= v;
    aR += 1.0;
    bR -= v;
  }
};

}  // namespace

Eigen::VectorXd tv1d_denoise(const Eigen::VectorXd& v, double lambda, bool boundary) {
  const auto n = static_cast<int>(v.size());
  if (n == 0 || lambda <= 0.0) return v;

  PiecewiseDerivative f;
  f.add_data(v[0]);
  if (boundary) {
    f.knots.push_back({0.0, 0.0, 2.0 * lambda});
    f.bL -= lambda;
    f.bR += lambda;
  }
  std::vector<double> lo(n > 1 ? n - 1 : 0), hi(n > 1 ? n - 1 : 0);
  for (int k = 0; k + 1 < n; ++k) {
    lo[k] = f.clip_left(-lambda);
    hi[k] = f.clip_right(lambda);
    f.add_data(v[k + 1]);
  }

  double last;
  if (!boundary) {
    last = f.root(0.0);
  } else {
    const double r1 = f.root(-lambda);
    const double r2 = f.root(lambda);
    last = r1 > 0.0 ? r1 : (r2 < 0.0 ? r2 : 0.0);
  }

  Eigen::VectorXd u(n);
  u[n - 1] = last;
  for (int k = n - 2; k >= 0; --k) u[k] = std::clamp(u[k + 1], lo[k], hi[k]);
  return u;
}

Eigen::VectorXd tv2d_denoise(const Eigen::VectorXd& v, int n, double lambda, double tol,
                             int max_iter) {
  if (lambda <= 0.0) return v;
  const Eigen::Index N = static_cast<Eigen::Index>(n) * n;
  auto rows_prox = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(N);
    for (int r = 0; r < n; ++r) out.segment(r * n, n) = tv1d_denoise(x.segment(r * n, n), lambda);
    return out;
  };
  auto cols_prox = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(N), col(n);
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < n; ++r) col[r] = x[r * n + c];
      const Eigen::VectorXd d = tv1d_denoise(col, lambda);
      for (int r = 0; r < n; ++r) out[r * n + c] = d[r];
    }
    return out;
  };

  // Dykstra: p and q carry the (scaled) dual fields of the two chains.
  Eigen::VectorXd x = v, p = Eigen::VectorXd::Zero(N), q = Eigen::VectorXd::Zero(N), y;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (int it = 0; it < max_iter; ++it) {
    y = rows_prox(x + p);
    p += x - y;
    Eigen::VectorXd x_next = cols_prox(y + q);
    q += y - x_next;
    const double change = (x_next - x).cwiseAbs().maxCoeff();
    const double split = (x_next - y).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    if (change <= tol * scale && split <= tol * scale) break;
  }
  return x;
}

}  // namespace singspec
