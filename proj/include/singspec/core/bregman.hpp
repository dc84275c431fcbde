#pragma once

#include "singspec/core/signal.hpp"

namespace singspec {

class Regularizer;

struct BregmanRecord {
  double value = 0.0;
  Signal subgradient;
};

/// D_J^p(v, u) = J(v) - J(u) - <p, v - u>. Throws InvalidSubgradient when p
/// does not certify as an element of dJ(u) at the given tolerance.
BregmanRecord bregman_distance(const Regularizer& J, const Signal& v, const Signal& u,
                               const Signal& p, double tol = 1e-6);

/// Symmetric distance <q - p, v - u> for p in dJ(u), q in dJ(v).
double symmetric_bregman(const Signal& v, const Signal& u, const Signal& q,
                         const Signal& p);

}  // namespace singspec
