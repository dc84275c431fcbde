#include <cmath>
#include <random>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/spectral/spectral.hpp"

namespace singspec {

namespace {

// Columns K e_j as vectors in the range, scaled so that Euclidean norms are range norms.
Eigen::MatrixXd column_matrix(const LinearOperator& K) {
  const Space& dom = K.domain();
  Eigen::MatrixXd C(K.range().size(), dom.size());
  const double s = std::sqrt(K.range().weight());
  for (int j = 0; j < dom.size(); ++j) C.col(j) = s * K.apply(Signal::unit(dom, j)).values();
  return C;
}

GroundState finish(const LinearOperator& K, const Regularizer& J, const Signal& u,
                   std::map<std::string, double> diag) {
  const VerifyOutcome ver = verify_singular_vector(K, J, align_sign(u), 1e-9);
  if (!ver.pair) throw SearchFailure("constructed ground state failed verification: " +
                                         ver.certificate.reason,
                                     u, ver.lambda);
  GroundState gs{*ver.pair, ver.lambda, 0.0, false, std::move(diag)};
  gs.pair.provenance = Provenance::AnalyticCatalog;
  return gs;
}

}  // namespace

GroundState l1_ground_state(const LinearOperator& K) {
  const Space& dom = K.domain();
  if (dom.kind() != SpaceKind::Coordinate) throw DimensionError("l1 ground state needs coordinates");
  const Eigen::MatrixXd C = column_matrix(K);
  const Eigen::VectorXd norms = C.colwise().norm();
  const double top = norms.maxCoeff();
  if (!(top > 0.0)) throw KernelElementError("K vanishes on every coordinate");
  int index = -1, ties = 0;
  for (int j = 0; j < norms.size(); ++j) {
    if (norms[j] >= top * (1.0 - 1e-12)) {
      if (index < 0) index = j;
      ++ties;
    }
  }
  const Signal u = Signal::unit(dom, index) / norms[index];
  return finish(K, Regularizer::l1(), u,
                {{"index", index}, {"ties", ties}, {"column_norm", norms[index]}});
}

LinearOperator pointmass_operator(const std::function<double(double, double)>& kernel,
                                  const Space& range, int candidates) {
  if (range.kind() != SpaceKind::Grid1D) throw DimensionError("range must be a 1D grid");
  if (candidates < 1) throw RangeError("need at least one candidate point");
  Eigen::MatrixXd M(range.size(), candidates);
  for (int i = 0; i < candidates; ++i) {
    const double y = (i + 0.5) / candidates;
    for (int j = 0; j < range.size(); ++j) M(j, i) = kernel(range.node(j), y);
  }
  return LinearOperator::dense(M, Space::coordinate(candidates), range);
}

GroundState pointmass_ground_state(const LinearOperator& K) {
  GroundState gs = l1_ground_state(K);
  const double m = K.domain().size();
  gs.diagnostics["z"] = (gs.diagnostics.at("index") + 0.5) / m;
  gs.diagnostics["c"] = 1.0 / gs.diagnostics.at("column_norm");
  return gs;
}

GroundState group_ground_state(const LinearOperator& K, const std::vector<int>& blocks) {
  const Regularizer J = Regularizer::group_l1(blocks);
  J.check_space(K.domain());
  const Eigen::MatrixXd C = column_matrix(K);
  int best = -1, ties = 0, off = 0, best_off = 0;
  double top = 0.0;
  Eigen::VectorXd best_vec;
  std::vector<double> sig;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C.middleCols(off, blocks[b]), Eigen::ComputeThinV);
    const double s = svd.singularValues()(0);
    sig.push_back(s);
    if (s > top * (1.0 + 1e-12)) {
      top = s;
      best = static_cast<int>(b);
      best_off = off;
      best_vec = svd.matrixV().col(0);
    }
    off += blocks[b];
  }
  if (!(top > 0.0)) throw KernelElementError("K vanishes on every block");
  for (double s : sig)
    if (s >= top * (1.0 - 1e-12)) ++ties;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(K.domain().size());
  u.segment(best_off, blocks[best]) = best_vec / top;
  return finish(K, J, Signal(K.domain(), u), {{"block", best}, {"ties", ties}, {"sigma_max", top}});
}

GroundState lowrank_ground_state(const LinearOperator& K, int restarts, std::uint64_t seed) {
  const Space& dom = K.domain();
  if (!dom.shape()) throw DimensionError("low-rank ground state needs a matrix-shaped domain");
  const int rows = dom.shape()->first, cols = dom.shape()->second;
  const double s = std::sqrt(K.range().weight());
  auto outer = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd vec(rows * cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) vec[r * cols + c] = a[r] * b[c];
    return Signal(dom, vec);
  };
  // Matrix of the map a -> K(a b^T) (or b -> K(a b^T) when left is false).
  auto partial = [&](const Eigen::VectorXd& fixed, bool left) {
    const int m = left ? rows : cols;
    Eigen::MatrixXd B(K.range().size(), m);
    for (int k = 0; k < m; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(m, k);
      B.col(k) = s * K.apply(left ? outer(e, fixed) : outer(fixed, e)).values();
    }
    return B;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double best = -1.0;
  Eigen::VectorXd bu, bv;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd v(cols), u(rows);
    for (auto& e : v) e = gauss(rng);
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < 500; ++it) {
      Eigen::JacobiSVD<Eigen::MatrixXd> su(partial(v, true), Eigen::ComputeThinV);
      u = su.matrixV().col(0);
      Eigen::JacobiSVD<Eigen::MatrixXd> sv(partial(u, false), Eigen::ComputeThinV);
      v = sv.matrixV().col(0);
      const double next = sv.singularValues()(0);
      const bool done = std::abs(next - sigma) <= 1e-15 * next;
      sigma = next;
      if (done) break;
    }
    if (sigma > best * (1.0 + 1e-12)) {
      best = sigma;
      bu = u;
      bv = v;
    }
  }
  if (!(best > 0.0)) throw KernelElementError("K vanishes on rank-one matrices");
  return finish(K, Regularizer::nuclear(), outer(bu, bv) / best, {{"sigma_max", best}});
}

std::pair<Signal, Signal> infconv_solve(const LinearOperator& K, const Regularizer& J1,
                                        const Regularizer& J2, const Signal& f, double alpha,
                                        int max_iter, double tol) {
  const double L = 2.0 * std::pow(K.norm_estimate(100) * 1.01, 2);
  Signal v = Signal::zeros(K.domain()), w = v, yv = v, yw = v;
  double t = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Signal g = K.adjoint(K.apply(yv + yw) - f);
    Signal v_next = J1.prox(yv - g / L, alpha / L);
    Signal w_next = J2.prox(yw - g / L, alpha / L);
    const double change = std::max((v_next - v).norm(), (w_next - w).norm());
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double mom = (t - 1.0) / t_next;
    yv = v_next + (v_next - v) * mom;
    yw = w_next + (w_next - w) * mom;
    v = std::move(v_next);
    w = std::move(w_next);
    t = t_next;
    if (change <= tol && it > 10) break;
  }
  return {v, w};
}

InfConvResult infconv_ground_state(const LinearOperator& K, const Regularizer& J1,
                                   const GroundState& g1, const Regularizer& J2,
                                   const GroundState& g2, double alpha) {
  const Signal zero = Signal::zeros(K.domain());
  const double l1 = g1.lambda0, l2 = g2.lambda0;
  InfConvResult out{0, std::min(l1, l2), zero, zero, 0.0, false};
  if (std::abs(l1 - l2) <= 1e-12 * std::max(l1, l2)) {
    // Tie: both component ground states are ground states; v and w hold them.
    out.v = g1.pair.u;
    out.w = g2.pair.u;
    out.verified = true;
    return out;
  }
  out.which = l1 < l2 ? 1 : 2;
  (out.which == 1 ? out.v : out.w) = out.which == 1 ? g1.pair.u : g2.pair.u;
  if (!(alpha * out.lambda0 < 1.0)) throw RangeError("need alpha * lambda0 < 1 for the joint check");
  const double c = 1.0 - alpha * out.lambda0;
  const auto [vs, ws] = infconv_solve(K, J1, J2, K.apply(out.v + out.w), alpha);
  out.joint_deviation = std::max((vs - out.v * c).norm(), (ws - out.w * c).norm());
  out.verified = out.joint_deviation <= 1e-6;
  return out;
}

}  // namespace singspec
