#pragma once

#include <Eigen/Dense>

#include <functional>

#include "singspec/core/space.hpp"

namespace singspec {

/// Sampled function (or coordinate vector) together with the space it lives on.
/// Immutable once built; arithmetic returns new signals.
class Signal {
 public:
  Signal(Space space, Eigen::VectorXd values);

  static Signal zeros(const Space& space);
  static Signal constant(const Space& space, double value);
  /// Samples f at cell centers of a 1D grid.
  static Signal sample(const Space& space, const std::function<double(double)>& f);
  /// Samples f(x, y) at cell centers of a 2D grid.
  static Signal sample(const Space& space,
                       const std::function<double(double, double)>& f);
  /// Coordinate unit vector e_i.
  static Signal unit(const Space& space, int i);

  const Space& space() const { return space_; }
  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }

  /// Norm induced by the space's inner product.
  double norm() const;
  bool is_zero() const { return values_.isZero(0.0); }

  Signal operator+(const Signal& other) const;
  Signal operator-(const Signal& other) const;
  Signal operator-() const;
  Signal operator*(double s) const;
  Signal operator/(double s) const;
  friend Signal operator*(double s, const Signal& x) { return x * s; }

 private:
  Space space_;
  Eigen::VectorXd values_;
};

}  // namespace singspec
