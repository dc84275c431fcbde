#include "singspec/core/signal.hpp"

#include <cmath>
#include <string>

#include "singspec/errors.hpp"

namespace singspec {

Signal::Signal(Space space, Eigen::VectorXd values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size())
    throw DimensionError("signal has " + std::to_string(values_.size()) +
                         " values, space " + space_.describe() + " needs " +
                         std::to_string(space_.size()));
  if (!values_.allFinite()) throw RangeError("signal contains non-finite values");
}

Signal Signal::zeros(const Space& space) {
  return Signal(space, Eigen::VectorXd::Zero(space.size()));
}

Signal Signal::constant(const Space& space, double value) {
  return Signal(space, Eigen::VectorXd::Constant(space.size(), value));
}

Signal Signal::sample(const Space& space, const std::function<double(double)>& f) {
  if (space.kind() != SpaceKind::Grid1D) throw DimensionError("1D sampling needs a 1D grid");
  Eigen::VectorXd v(space.size());
  for (int i = 0; i < space.n(); ++i) v[i] = f(space.node(i));
  return Signal(space, std::move(v));
}

Signal Signal::sample(const Space& space, const std::function<double(double, double)>& f) {
  if (space.kind() != SpaceKind::Grid2D) throw DimensionError("2D sampling needs a 2D grid");
  const int n = space.n();
  Eigen::VectorXd v(space.size());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) v[iy * n + ix] = f(space.node(ix), space.node(iy));
  return Signal(space, std::move(v));
}

Signal Signal::unit(const Space& space, int i) {
  if (i < 0 || i >= space.size()) throw RangeError("unit vector index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(space.size());
  v[i] = 1.0;
  return Signal(space, std::move(v));
}

double Signal::norm() const { return std::sqrt(space_.weight() * values_.squaredNorm()); }

Signal Signal::operator+(const Signal& other) const {
  require_same_space(space_, other.space_, "signal addition");
  return Signal(space_, values_ + other.values_);
}

Signal Signal::operator-(const Signal& other) const {
  require_same_space(space_, other.space_, "signal subtraction");
  return Signal(space_, values_ - other.values_);
}

Signal Signal::operator-() const { return Signal(space_, -values_); }

Signal Signal::operator*(double s) const { return Signal(space_, values_ * s); }

Signal Signal::operator/(double s) const { return Signal(space_, values_ / s); }

}  // namespace singspec
