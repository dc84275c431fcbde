#pragma once

#include "singspec/core/linear_operator.hpp"
#include "singspec/core/signal.hpp"

namespace singspec {

/// h * sum u_i v_i (midpoint rule) when weighted, plain dot product otherwise.
double inner(const Signal& u, const Signal& v, bool weighted);

/// Inner product in the space both signals live on.
inline double inner(const Signal& u, const Signal& v) {
  return inner(u, v, u.space().is_grid());
}

/// K-product <Ku, Kv> in the range space.
double k_inner(const Signal& u, const Signal& v, const LinearOperator& K);

/// ||Ku|| in the range space.
double k_norm(const Signal& u, const LinearOperator& K);

}  // namespace singspec
