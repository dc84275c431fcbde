#include <cmath>
#include <string>

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/spectral/spectral.hpp"

namespace singspec {

VerifyOutcome verify_singular_vector(const LinearOperator& K, const Regularizer& J,
                                     const Signal& u, double tol) {
  require_same_space(u.space(), K.domain(), "candidate vs operator domain");
  J.check_space(u.space());
  const double nk = k_norm(u, K);
  if (!(nk > 0.0)) throw KernelElementError("candidate is annihilated by K");
  const Signal un = u / nk;
  VerifyOutcome out;
  out.lambda = J.value(un);
  const Signal p = K.adjoint(K.apply(un)) * out.lambda;
  out.certificate = J.certify(un, p, tol);
  out.certificate.diagnostics["info_normalization"] = std::abs(k_norm(un, K) - 1.0);
  if (out.certificate.accepted && out.lambda > 0.0)
    out.pair = SingularPair{un, out.lambda, p, Provenance::NumericalSearch, {}};
  return out;
}

double q4_primitive(double x) {
  if (x < 0.25) return -4.0 * x;
  if (x <= 0.75) return 4.0 * (x - 0.5);
  return 4.0 * (1.0 - x);
}

Regularizer catalog_regularizer(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::Haar: return Regularizer::tvstar1d();
    case CatalogKind::USqrt32: return Regularizer::aniso_tv2d();
    default: return Regularizer::tv1d();
  }
}

namespace {

SingularPair analytic(const Signal& u, double lambda, std::map<std::string, double> params) {
  return SingularPair{u, lambda, u * lambda, Provenance::AnalyticCatalog, std::move(params)};
}

void need_1d(const Space& space, int divisor, const char* what) {
  if (space.kind() != SpaceKind::Grid1D) throw DimensionError(std::string(what) + " lives on a 1D grid");
  if (space.n() % divisor != 0)
    throw RangeError(std::string(what) + " needs n divisible by " + std::to_string(divisor));
}

}  // namespace

SingularPair catalog_make(CatalogKind kind, const CatalogParams& params, const Space& space) {
  switch (kind) {
    case CatalogKind::Ua: {
      need_1d(space, 1, "u^a");
      if (!(params.a > 0.0 && params.a < 1.0)) throw RangeError("a must lie in (0, 1)");
      const int n = space.n();
      const auto m = static_cast<int>(std::lround(params.a * n));
      if (m < 1 || m > n - 1) throw RangeError("a snaps onto the boundary of the grid");
      const double a = static_cast<double>(m) / n;
      const double r = std::sqrt((1.0 - a) * a);
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = i < m ? -r / a : r / (1.0 - a);
      return analytic(Signal(space, v), 1.0 / r, {{"a", a}});
    }
    case CatalogKind::Haar: {
      const int j = params.j, k = params.k;
      if (j < 0 || j > 30) throw RangeError("Haar level out of range");
      if (j == 0) {
        if (k != 0) throw RangeError("psi_{0,k} exists only for k = 0");
        need_1d(space, 1, "Haar function");
        return analytic(Signal::constant(space, 1.0), 2.0, {{"j", 0}, {"k", 0}});
      }
      const int count = 1 << (j - 1);
      if (k < 0 || k >= count) throw RangeError("Haar shift out of range");
      need_1d(space, 1 << j, "Haar function");
      const int n = space.n();
      const int width = n / count;  // support length in cells
      const double amp = std::pow(2.0, 0.5 * (j - 1));
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (int i = k * width; i < (k + 1) * width; ++i) v[i] = i < k * width + width / 2 ? amp : -amp;
      // 2^{(j+3)/2} as an exact power of two or sqrt(2) times one.
      const double lambda = ((j + 3) % 2 == 0) ? std::ldexp(1.0, (j + 3) / 2)
                                               : std::sqrt(2.0) * std::ldexp(1.0, (j + 2) / 2);
      return analytic(Signal(space, v), lambda, {{"j", j}, {"k", k}});
    }
    case CatalogKind::U4: {
      need_1d(space, 4, "u4");
      const int n = space.n();
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = (i >= n / 4 && i < 3 * n / 4) ? 1.0 : -1.0;
      return analytic(Signal(space, v), 4.0, {});
    }
    case CatalogKind::USqrt32: {
      if (space.kind() != SpaceKind::Grid2D) throw DimensionError("u_sqrt32 lives on a 2D grid");
      const int n = space.n();
      if (n % 4 != 0) throw RangeError("u_sqrt32 needs n divisible by 4");
      auto g = [n](int i) { return (i >= n / 4 && i < 3 * n / 4) ? 1.0 : -1.0; };
      Eigen::VectorXd v(n * n);
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) v[iy * n + ix] = (g(ix) + g(iy)) / std::sqrt(2.0);
      return analytic(Signal(space, v), std::sqrt(32.0), {});
    }
  }
  throw RangeError("unknown catalog kind");
}

}  // namespace singspec
