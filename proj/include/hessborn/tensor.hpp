// SPDX-License-Identifier: MIT
/**
 * @file tensor.hpp
 * @brief Dense multi-index arrays, tensor values, and small linear algebra
 *        templated on the scalar (double or Jet).
 */
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <span>
#include <vector>

#include "hessborn/jet.hpp"

namespace Eigen {

template <>
struct NumTraits<hessborn::Jet> : GenericNumTraits<double> {
  using Real = hessborn::Jet;
  using NonInteger = hessborn::Jet;
  using Nested = hessborn::Jet;
  using Literal = hessborn::Jet;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<hessborn::Jet, double, BinaryOp> {
  using ReturnType = hessborn::Jet;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, hessborn::Jet, BinaryOp> {
  using ReturnType = hessborn::Jet;
};

}  // namespace Eigen

namespace hessborn {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Row-major dense array with per-axis extents.
template <class Scalar>
class DenseArray {
 public:
  DenseArray() = default;
  DenseArray(std::vector<int> dims, Scalar fill = Scalar(0.0)) : dims_(std::move(dims)) {
    data_.assign(std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                                 [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); }),
                 fill);
  }
  static DenseArray cube(int n, int rank, Scalar fill = Scalar(0.0)) {
    return DenseArray(std::vector<int>(rank, n), fill);
  }

  int rank() const { return static_cast<int>(dims_.size()); }
  int dim(int axis) const { return dims_[axis]; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  template <class... Idx>
  Scalar& operator()(Idx... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... Idx>
  const Scalar& operator()(Idx... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }
  Scalar& flat(std::size_t i) { return data_[i]; }
  const Scalar& flat(std::size_t i) const { return data_[i]; }
  std::span<const Scalar> data() const { return data_; }

 private:
  std::vector<int> dims_;
  std::vector<Scalar> data_;

  std::size_t offset(std::initializer_list<int> idx) const {
    std::size_t off = 0;
    auto d = dims_.begin();
    for (int i : idx) off = off * static_cast<std::size_t>(*d++) + static_cast<std::size_t>(i);
    return off;
  }
};

/// Connection coefficients indexed (k, i, j) for Gamma^k_ij.
template <class Scalar>
using Christoffel = DenseArray<Scalar>;

enum class Frame { BaseCoordinate, BundleCoordinate, Adapted };

std::string to_string(Frame frame);

/// A tensor evaluated at a point: components plus a variance signature over
/// {'u','l'} (one letter per axis) and the frame the components refer to.
struct TensorValue {
  DenseArray<double> components;
  std::string variance;
  Frame frame = Frame::BaseCoordinate;
  std::vector<double> point;

  TensorValue() = default;
  TensorValue(DenseArray<double> c, std::string var, Frame f, std::vector<double> p);

  int rank() const { return components.rank(); }
  template <class... Idx>
  double operator()(Idx... idx) const {
    return components(idx...);
  }
  double max_abs() const;
};

template <class Scalar>
double max_abs(const DenseArray<Scalar>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(value_of(a.flat(i))));
  return m;
}

/// max |a - b|; extents must match.
inline double max_abs_diff(const DenseArray<double>& a, const DenseArray<double>& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("max_abs_diff: extent mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.flat(i) - b.flat(i)));
  return m;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max(out, std::abs(value_of(m(i, j))));
  return out;
}

inline Eigen::MatrixXd values(const Mat<Jet>& m) {
  return m.unaryExpr([](const Jet& x) { return x.value(); });
}
inline Eigen::MatrixXd values(const Eigen::MatrixXd& m) { return m; }

inline DenseArray<double> values(const DenseArray<Jet>& a) {
  DenseArray<double> out(a.dims());
  for (std::size_t i = 0; i < a.size(); ++i) out.flat(i) = a.flat(i).value();
  return out;
}
inline DenseArray<double> values(const DenseArray<double>& a) { return a; }

inline Mat<Jet> derivative(const Mat<Jet>& m, int var) {
  return m.unaryExpr([var](const Jet& x) { return x.derivative(var); });
}
inline Mat<Jet> truncated(const Mat<Jet>& m, int order) {
  return m.unaryExpr([order](const Jet& x) { return x.truncated(order); });
}
inline DenseArray<Jet> truncated(const DenseArray<Jet>& a, int order) {
  DenseArray<Jet> out(a.dims());
  for (std::size_t i = 0; i < a.size(); ++i) out.flat(i) = a.flat(i).truncated(order);
  return out;
}

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gauss-Jordan inverse with partial pivoting on the value part. Works for
/// double and Jet scalars; throws SingularMatrixError on a vanishing pivot.
template <class Scalar>
Mat<Scalar> inverse(const Mat<Scalar>& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  Mat<Scalar> work = a;
  Mat<Scalar> inv = Mat<Scalar>::Identity(n, n);
  const double scale = std::max(1.0, max_abs(a));
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(value_of(work(r, col))) > std::abs(value_of(work(pivot, col)))) pivot = r;
    if (std::abs(value_of(work(pivot, col))) <= 1e-14 * scale)
      throw SingularMatrixError("singular matrix (pivot " + std::to_string(value_of(work(pivot, col))) + ")");
    if (pivot != col) {
      work.row(col).swap(work.row(pivot));
      inv.row(col).swap(inv.row(pivot));
    }
    const Scalar p_inv = Scalar(1.0) / work(col, col);
    for (Eigen::Index c = 0; c < n; ++c) {
      work(col, c) = work(col, c) * p_inv;
      inv(col, c) = inv(col, c) * p_inv;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const Scalar f = work(r, col);
      if constexpr (std::is_same_v<Scalar, double>) {
        if (f == 0.0) continue;
      } else {
        if (f.is_constant() && f.value() == 0.0) continue;
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        work(r, c) = work(r, c) - f * work(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  return inv;
}

/// Smallest Cholesky pivot of a symmetric matrix; non-positive means not SPD.
double smallest_cholesky_pivot(const Eigen::MatrixXd& a);

}  // namespace hessborn
