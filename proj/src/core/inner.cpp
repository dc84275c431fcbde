#include "singspec/core/inner.hpp"

#include <cmath>

namespace singspec {

double inner(const Signal& u, const Signal& v, bool weighted) {
  require_same_space(u.space(), v.space(), "inner product");
  const double dot = u.values().dot(v.values());
  return weighted ? u.space().weight() * dot : dot;
}

double k_inner(const Signal& u, const Signal& v, const LinearOperator& K) {
  require_same_space(u.space(), v.space(), "K-product");
  return inner(K.apply(u), K.apply(v));
}

double k_norm(const Signal& u, const LinearOperator& K) { return K.apply(u).norm(); }

}  // namespace singspec
