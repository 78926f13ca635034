// SPDX-License-Identifier: MIT
#include "hessborn/tensor.hpp"

namespace hessborn {

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::BaseCoordinate: return "base-coordinate";
    case Frame::BundleCoordinate: return "bundle-coordinate";
    case Frame::Adapted: return "adapted";
  }
  return "unknown";
}

TensorValue::TensorValue(DenseArray<double> c, std::string var, Frame f, std::vector<double> p)
    : components(std::move(c)), variance(std::move(var)), frame(f), point(std::move(p)) {
  if (static_cast<int>(variance.size()) != components.rank())
    throw std::invalid_argument("tensor variance length does not match rank");
  for (char v : variance)
    if (v != 'u' && v != 'l') throw std::invalid_argument("tensor variance must use 'u'/'l'");
}

double TensorValue::max_abs() const { return hessborn::max_abs(components); }

double smallest_cholesky_pivot(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    smallest = std::min(smallest, d);
    if (d <= 0.0) return d;
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return smallest;
}

}  // namespace hessborn
