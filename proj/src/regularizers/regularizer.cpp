#include "singspec/regularizers/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/regularizers/tv_prox.hpp"
#include "tv2d_dual.hpp"

namespace singspec {

namespace {

double tv1d_raw(const Eigen::VectorXd& u) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < u.size(); ++i) s += std::abs(u[i + 1] - u[i]);
  return s;
}

Eigen::MatrixXd as_matrix(const Signal& u) {
  const auto shape = *u.space().shape();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      u.values().data(), shape.first, shape.second);
}

Signal from_matrix(const Space& space, const Eigen::MatrixXd& m) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  return Signal(space, Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size()));
}

Certificate finish(Certificate c, double tol) {
  c.tol = tol;
  c.accepted = true;
  for (const auto& [key, val] : c.diagnostics) {
    if (key.rfind("info_", 0) == 0) continue;
    if (!(val <= tol)) {
      c.accepted = false;
      if (!c.reason.empty()) c.reason += "; ";
      std::ostringstream os;
      os << key << " = " << val << " exceeds " << tol;
      c.reason += os.str();
    }
  }
  return c;
}

}  // namespace

Eigen::VectorXd running_primitive(const Signal& p) {
  if (p.space().kind() != SpaceKind::Grid1D) throw DimensionError("primitive needs a 1D grid");
  Eigen::VectorXd q(p.size());
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    acc += p[i];
    q[i] = p.space().h() * acc;
  }
  return q;
}

Regularizer Regularizer::tv1d() { return Regularizer(RegKind::TV1D, {}, 1.0); }
Regularizer Regularizer::tvstar1d() { return Regularizer(RegKind::TVStar1D, {}, 1.0); }
Regularizer Regularizer::aniso_tv2d() { return Regularizer(RegKind::AnisoTV2D, {}, 1.0); }
Regularizer Regularizer::l1() { return Regularizer(RegKind::L1, {}, 1.0); }
Regularizer Regularizer::nuclear() { return Regularizer(RegKind::Nuclear, {}, 1.0); }
Regularizer Regularizer::quadratic() { return Regularizer(RegKind::QuadraticNorm, {}, 1.0); }

Regularizer Regularizer::group_l1(std::vector<int> block_sizes) {
  if (block_sizes.empty()) throw RangeError("group partition is empty");
  for (int b : block_sizes)
    if (b < 1) throw RangeError("group sizes must be positive");
  return Regularizer(RegKind::GroupL1, std::move(block_sizes), 1.0);
}

Regularizer Regularizer::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw RangeError("regularizer weight must be positive");
  Regularizer r = *this;
  r.weight_ *= s;
  return r;
}

std::string Regularizer::name() const {
  std::string base;
  switch (kind_) {
    case RegKind::TV1D: base = "tv"; break;
    case RegKind::TVStar1D: base = "tvstar"; break;
    case RegKind::AnisoTV2D: base = "tv2d"; break;
    case RegKind::L1: base = "l1"; break;
    case RegKind::GroupL1: base = "group"; break;
    case RegKind::Nuclear: base = "nuclear"; break;
    case RegKind::QuadraticNorm: base = "quad"; break;
  }
  if (weight_ != 1.0) {
    std::ostringstream os;
    os << weight_ << "*" << base;
    return os.str();
  }
  return base;
}

void Regularizer::check_space(const Space& space) const {
  auto fail = [&](const char* need) {
    throw DimensionError(name() + " needs " + need + ", got " + space.describe());
  };
  switch (kind_) {
    case RegKind::TV1D:
    case RegKind::TVStar1D:
      if (space.kind() != SpaceKind::Grid1D) fail("a 1D grid");
      break;
    case RegKind::AnisoTV2D:
      if (space.kind() != SpaceKind::Grid2D) fail("a 2D grid");
      break;
    case RegKind::L1:
      if (space.kind() != SpaceKind::Coordinate) fail("a coordinate space");
      break;
    case RegKind::GroupL1: {
      if (space.kind() != SpaceKind::Coordinate) fail("a coordinate space");
      if (std::accumulate(blocks_.begin(), blocks_.end(), 0) != space.size())
        fail("group sizes summing to the dimension");
      break;
    }
    case RegKind::Nuclear:
      if (space.kind() != SpaceKind::Coordinate || !space.shape()) fail("a matrix-shaped space");
      break;
    case RegKind::QuadraticNorm: break;
  }
}

double Regularizer::value(const Signal& u) const {
  check_space(u.space());
  const Eigen::VectorXd& x = u.values();
  double v = 0.0;
  switch (kind_) {
    case RegKind::TV1D: v = tv1d_raw(x); break;
    case RegKind::TVStar1D: v = tv1d_raw(x) + std::abs(x[0]) + std::abs(x[x.size() - 1]); break;
    case RegKind::AnisoTV2D: v = u.space().h() * tv2d_raw(x, u.space().n()); break;
    case RegKind::L1: v = x.lpNorm<1>(); break;
    case RegKind::GroupL1: {
      int off = 0;
      for (int b : blocks_) {
        v += x.segment(off, b).norm();
        off += b;
      }
      break;
    }
    case RegKind::Nuclear: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(u));
      v = svd.singularValues().sum();
      break;
    }
    case RegKind::QuadraticNorm: v = 0.5 * u.norm() * u.norm(); break;
  }
  return weight_ * v;
}

Signal Regularizer::prox(const Signal& v, double tau) const {
  check_space(v.space());
  if (!(tau > 0.0) || !std::isfinite(tau)) throw RangeError("prox step must be positive");
  const double t = tau * weight_;
  const Space& sp = v.space();
  const Eigen::VectorXd& x = v.values();
  switch (kind_) {
    case RegKind::TV1D: return Signal(sp, tv1d_denoise(x, t / sp.h(), false));
    case RegKind::TVStar1D: return Signal(sp, tv1d_denoise(x, t / sp.h(), true));
    case RegKind::AnisoTV2D: return Signal(sp, tv2d_denoise(x, sp.n(), t / sp.h()));
    case RegKind::L1: {
      Eigen::VectorXd out = x;
      for (auto& e : out) e = std::copysign(std::max(std::abs(e) - t, 0.0), e);
      return Signal(sp, out);
    }
    case RegKind::GroupL1: {
      Eigen::VectorXd out = x;
      int off = 0;
      for (int b : blocks_) {
        const double nb = x.segment(off, b).norm();
        out.segment(off, b) *= nb > t ? (1.0 - t / nb) : 0.0;
        off += b;
      }
      return Signal(sp, out);
    }
    case RegKind::Nuclear: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(v), Eigen::ComputeThinU | Eigen::ComputeThinV);
      Eigen::VectorXd s = (svd.singularValues().array() - t).max(0.0);
      return from_matrix(sp, svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose());
    }
    case RegKind::QuadraticNorm: return v / (1.0 + t);
  }
  return v;
}

Certificate Regularizer::certify(const Signal& u, const Signal& p, double tol) const {
  check_space(u.space());
  require_same_space(u.space(), p.space(), "certificate");
  Certificate c;
  const double s = weight_;
  const Space& sp = u.space();

  if (kind_ == RegKind::QuadraticNorm) {
    const double scale = std::max(1.0, s * u.norm());
    c.diagnostics["equality_residual"] = (p - u * s).norm() / scale;
    return finish(c, tol);
  }

  const double J = value(u);
  c.diagnostics["pairing_gap"] = std::abs(inner(p, u) - J) / std::max(1.0, J);
  c.diagnostics["info_J"] = J;
  const Signal ps = p / s;  // test ps in d(J/s)
  const Eigen::VectorXd& x = ps.values();

  switch (kind_) {
    case RegKind::TV1D: {
      const Eigen::VectorXd q = running_primitive(ps);
      const double qmax = q.head(q.size() - 1).cwiseAbs().maxCoeff();
      c.diagnostics["dual_excess"] = std::max(qmax - 1.0, 0.0);
      c.diagnostics["endpoint"] = std::abs(q[q.size() - 1]);
      c.diagnostics["info_dual_norm"] = qmax;
      break;
    }
    case RegKind::TVStar1D: {
      // Boundary terms leave the primitive's offset free: only its range counts.
      const Eigen::VectorXd q = running_primitive(ps);
      const double hi = std::max(0.0, q.maxCoeff());
      const double lo = std::min(0.0, q.minCoeff());
      c.diagnostics["dual_excess"] = std::max(0.5 * (hi - lo) - 1.0, 0.0);
      c.diagnostics["info_dual_norm"] = 0.5 * (hi - lo);
      break;
    }
    case RegKind::AnisoTV2D: {
      const DivergenceFit fit = fit_divergence(x, sp.n(), sp.h());
      c.diagnostics["dual_excess"] = std::max(fit.field_max - 1.0, 0.0);
      c.diagnostics["divergence_residual"] =
          fit.residual / std::max(1.0, x.cwiseAbs().maxCoeff());
      c.diagnostics["info_dual_norm"] = fit.field_max;
      c.diagnostics["info_box_fallback"] = fit.used_box ? 1.0 : 0.0;
      break;
    }
    case RegKind::L1: {
      const double m = x.cwiseAbs().maxCoeff();
      c.diagnostics["dual_excess"] = std::max(m - 1.0, 0.0);
      c.diagnostics["info_dual_norm"] = m;
      break;
    }
    case RegKind::GroupL1: {
      double m = 0.0;
      int off = 0;
      for (int b : blocks_) {
        m = std::max(m, x.segment(off, b).norm());
        off += b;
      }
      c.diagnostics["dual_excess"] = std::max(m - 1.0, 0.0);
      c.diagnostics["info_dual_norm"] = m;
      break;
    }
    case RegKind::Nuclear: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(ps));
      const double m = svd.singularValues()(0);
      c.diagnostics["dual_excess"] = std::max(m - 1.0, 0.0);
      c.diagnostics["info_dual_norm"] = m;
      break;
    }
    case RegKind::QuadraticNorm: break;
  }
  return finish(c, tol);
}

Signal Regularizer::subgradient(const Signal& u) const {
  check_space(u.space());
  const Space& sp = u.space();
  const Eigen::VectorXd& x = u.values();
  const auto n = x.size();
  auto sgn = [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); };
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  switch (kind_) {
    case RegKind::TV1D:
    case RegKind::TVStar1D: {
      // h p_i = z_{i-1} - z_i with z_i = sign(u_{i+1} - u_i); boundary z from |u_0|, |u_{n-1}|.
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n + 1);
      for (Eigen::Index i = 0; i + 1 < n; ++i) z[i + 1] = sgn(x[i + 1] - x[i]);
      if (kind_ == RegKind::TVStar1D) {
        z[0] = sgn(x[0]);
        z[n] = -sgn(x[n - 1]);
      }
      for (Eigen::Index i = 0; i < n; ++i) p[i] = (z[i] - z[i + 1]) / sp.h();
      break;
    }
    case RegKind::AnisoTV2D: {
      Eigen::VectorXd g = grad2d(x, sp.n());
      for (auto& e : g) e = sgn(e);
      p = grad2d_adjoint(g, sp.n()) / sp.h();
      break;
    }
    case RegKind::L1:
      for (Eigen::Index i = 0; i < n; ++i) p[i] = sgn(x[i]);
      break;
    case RegKind::GroupL1: {
      int off = 0;
      for (int b : blocks_) {
        const double nb = x.segment(off, b).norm();
        if (nb > 0.0) p.segment(off, b) = x.segment(off, b) / nb;
        off += b;
      }
      break;
    }
    case RegKind::Nuclear: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(u), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd& s = svd.singularValues();
      const double cut = 1e-12 * std::max(1.0, s.size() ? s(0) : 0.0);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(as_matrix(u).rows(), as_matrix(u).cols());
      for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > cut) m += svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
      return from_matrix(sp, m) * weight_;
    }
    case RegKind::QuadraticNorm: p = x; break;
  }
  return Signal(sp, p * weight_);
}

std::vector<Signal> Regularizer::kernel_basis(const Space& space) const {
  check_space(space);
  if (kind_ == RegKind::TV1D || kind_ == RegKind::AnisoTV2D) return {Signal::constant(space, 1.0)};
  return {};
}

Regularizer regularizer_from_name(const std::string& name) {
  if (name == "tv") return Regularizer::tv1d();
  if (name == "tvstar") return Regularizer::tvstar1d();
  if (name == "tv2d") return Regularizer::aniso_tv2d();
  if (name == "l1") return Regularizer::l1();
  if (name == "nuclear") return Regularizer::nuclear();
  if (name == "quad") return Regularizer::quadratic();
  if (name.rfind("group", 0) == 0) {
    std::vector<int> sizes;
    const auto colon = name.find(':');
    if (colon == std::string::npos) throw RangeError("group needs sizes, e.g. group:2,3");
    std::stringstream ss(name.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
    return Regularizer::group_l1(sizes);
  }
  throw RangeError("unknown regularizer '" + name + "'");
}

}  // namespace singspec
