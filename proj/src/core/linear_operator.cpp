#include "singspec/core/linear_operator.hpp"

#include <cmath>
#include <random>

#include "singspec/errors.hpp"

namespace singspec {

LinearOperator::LinearOperator(OperatorKind kind, Eigen::MatrixXd matrix, Space domain,
                               Space range)
    : kind_(kind), matrix_(std::move(matrix)), domain_(std::move(domain)), range_(std::move(range)) {}

LinearOperator LinearOperator::identity(const Space& space) {
  return LinearOperator(OperatorKind::Identity, Eigen::MatrixXd(), space, space);
}

LinearOperator LinearOperator::dense(Eigen::MatrixXd matrix) {
  if (matrix.size() == 0) throw DimensionError("empty matrix");
  const auto rows = static_cast<int>(matrix.rows());
  const auto cols = static_cast<int>(matrix.cols());
  return dense(std::move(matrix), Space::coordinate(cols), Space::coordinate(rows));
}

LinearOperator LinearOperator::dense(Eigen::MatrixXd matrix, const Space& domain,
                                     const Space& range) {
  if (matrix.rows() != range.size() || matrix.cols() != domain.size())
    throw DimensionError("matrix shape does not match domain/range");
  return LinearOperator(OperatorKind::DenseMatrix, std::move(matrix), domain, range);
}

LinearOperator LinearOperator::sampled_kernel(Eigen::MatrixXd samples, const Space& domain,
                                              const Space& range) {
  if (samples.rows() != range.size() || samples.cols() != domain.size())
    throw DimensionError("kernel samples do not match domain/range");
  return LinearOperator(OperatorKind::SampledKernel, std::move(samples), domain, range);
}

Signal LinearOperator::apply(const Signal& u) const {
  require_same_space(u.space(), domain_, "operator apply");
  switch (kind_) {
    case OperatorKind::Identity: return u;
    case OperatorKind::DenseMatrix: return Signal(range_, matrix_ * u.values());
    case OperatorKind::SampledKernel:
      return Signal(range_, domain_.weight() * (matrix_ * u.values()));
  }
  return u;
}

Signal LinearOperator::adjoint(const Signal& v) const {
  require_same_space(v.space(), range_, "operator adjoint");
  switch (kind_) {
    case OperatorKind::Identity: return v;
    case OperatorKind::DenseMatrix:
      return Signal(domain_,
                    (range_.weight() / domain_.weight()) * (matrix_.transpose() * v.values()));
    case OperatorKind::SampledKernel:
      return Signal(domain_, range_.weight() * (matrix_.transpose() * v.values()));
  }
  return v;
}

double LinearOperator::norm_estimate(int iterations) const {
  if (kind_ == OperatorKind::Identity) return 1.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(domain_.size());
  for (auto& xi : x) xi = gauss(rng);
  Signal u(domain_, x);
  u = u / u.norm();
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Signal w = adjoint(apply(u));
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    estimate = std::sqrt(nw);
    u = w / nw;
  }
  return estimate;
}

}  // namespace singspec
