#include "singspec/core/bregman.hpp"

#include "singspec/core/inner.hpp"
#include "singspec/errors.hpp"
#include "singspec/regularizers/regularizer.hpp"

namespace singspec {

BregmanRecord bregman_distance(const Regularizer& J, const Signal& v, const Signal& u,
                               const Signal& p, double tol) {
  require_same_space(v.space(), u.space(), "Bregman distance");
  const Certificate cert = J.certify(u, p, tol);
  if (!cert.accepted) throw InvalidSubgradient("p is not a subgradient at u: " + cert.reason);
  const double value = J.value(v) - J.value(u) - inner(p, v - u);
  return BregmanRecord{value, p};
}

double symmetric_bregman(const Signal& v, const Signal& u, const Signal& q, const Signal& p) {
  return inner(q - p, v - u);
}

}  // namespace singspec
