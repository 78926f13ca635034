// SPDX-License-Identifier: MIT
/**
 * @file jet.hpp
 * @brief Truncated multivariate Taylor arithmetic (forward-mode jets).
 *
 * A Jet holds the Taylor coefficients c_alpha of a smooth function around a
 * point, for every multi-index alpha with |alpha| <= order, in `arity` seeded
 * variables. Mixed partials are recovered as alpha! * c_alpha, so each sorted
 * multi-index owns exactly one stored cell and Schwarz symmetry is structural.
 *
 * A default-constructed Jet (or one built from a double) is a constant with no
 * layout; it promotes to whatever layout it is combined with. Two non-constant
 * jets must share (arity, order).
 *
 * @code
 * auto xs = hessborn::seed(std::vector{2.0, 5.0}, 2);
 * auto f = xs[0] * xs[1];
 * f.partial({0});     // 5
 * f.partial({0, 1});  // 1
 * @endcode
 */
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace hessborn {

/// Largest supported seeded-variable count (2n with n <= 4).
inline constexpr int kMaxJetArity = 8;
/// Largest order used internally. Public seeding accepts 1..kMaxJetOrder.
inline constexpr int kMaxJetOrder = 5;

using MultiIndex = std::array<std::uint8_t, kMaxJetArity>;

/// Monomial table and product/shift schedules for one (arity, order) pair.
/// Instances are interned and live for the program lifetime.
class JetLayout {
 public:
  struct ProductTerm {
    int lhs, rhs, out;
  };
  struct ShiftTerm {
    int src;  // index in this layout
    double factor;
  };

  static const JetLayout& get(int arity, int order);

  int arity() const { return arity_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const MultiIndex& exponent(int idx) const { return exponents_[idx]; }
  int degree(int idx) const { return degrees_[idx]; }
  /// alpha! for monomial idx.
  double factorial_weight(int idx) const { return weights_[idx]; }
  /// Returns -1 when alpha is not representable.
  int index_of(const MultiIndex& alpha) const;

  std::span<const ProductTerm> product() const { return product_; }
  /// Schedule for d/dx_var: entry t gives the source coefficient for monomial
  /// t of the (arity, order-1) layout.
  std::span<const ShiftTerm> shift(int var) const { return shifts_[var]; }

 private:
  JetLayout(int arity, int order);

  int arity_;
  int order_;
  std::vector<MultiIndex> exponents_;
  std::vector<int> degrees_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> keys_;
  std::vector<ProductTerm> product_;
  std::vector<std::vector<ShiftTerm>> shifts_;

  std::uint32_t key(const MultiIndex& alpha) const;
};

class Jet {
 public:
  Jet() : coeffs_(1, 0.0) {}
  Jet(double constant) : coeffs_(1, constant) {}  // NOLINT(google-explicit-constructor)

  /// Variable `index` of `arity` seeded variables, valued at `value`.
  static Jet variable(int arity, int order, int index, double value);
  /// Zero jet on the given layout.
  static Jet zero(int arity, int order);

  double value() const { return coeffs_[0]; }
  bool is_constant() const { return layout_ == nullptr; }
  /// 0 for constants.
  int order() const;
  int arity() const;
  const JetLayout* layout() const { return layout_; }

  /// Mixed partial derivative for the listed variable indices (any order).
  /// An empty list returns the value.
  double partial(std::span<const int> vars) const;
  double partial(std::initializer_list<int> vars) const {
    return partial(std::span<const int>(vars.begin(), vars.size()));
  }
  /// Taylor coefficient by flat index.
  double coefficient(int idx) const { return coeffs_[idx]; }
  std::span<const double> coefficients() const { return coeffs_; }

  /// Jet of d/dx_var, one order lower.
  Jet derivative(int var) const;
  /// Drops terms of degree > order (order may not exceed the current order).
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);

  // Ordering and equality compare values only; needed by generic code
  // (pivot selection, Eigen traits).
  friend bool operator<(const Jet& a, const Jet& b) { return a.value() < b.value(); }
  friend bool operator>(const Jet& a, const Jet& b) { return a.value() > b.value(); }
  friend bool operator==(const Jet& a, const Jet& b) { return a.value() == b.value(); }

 private:
  friend Jet apply_taylor(const Jet& x, std::span<const double> derivs);

  const JetLayout* layout_ = nullptr;
  std::vector<double> coeffs_;

  void promote_to(const JetLayout* layout);
  static const JetLayout* common_layout(const Jet& a, const Jet& b);
};

/// m jets seeded at `point`: jet i has value point[i] and unit derivative in
/// variable i. Throws std::invalid_argument for an unsupported order.
std::vector<Jet> seed(std::span<const double> point, int order);

/// Evaluates sum_k derivs[k]/k! * (x - x.value())^k, i.e. composes a scalar
/// function with known derivatives at x.value() with the jet x.
Jet apply_taylor(const Jet& x, std::span<const double> derivs);

// Elementary functions. Domain violations throw std::domain_error.
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet tanh(const Jet& x);
Jet pow(const Jet& x, double exponent);
Jet reciprocal(const Jet& x);
Jet abs(const Jet& x);

/// Composes a jet over n base variables (expanded at base.value point
/// `centre`) with n argument jets sharing a common layout.
Jet compose(const Jet& f, std::span<const double> centre, std::span<const Jet> args);

inline constexpr double kDefaultFdStep = 1e-5;

/// Central-difference gradient (f(x + h e_i) - f(x - h e_i)) / 2h. Used as an
/// independent check on jet derivatives; NaNs propagate to the caller.
template <class F>
std::vector<double> fd_gradient(F&& f, std::span<const double> point, double h = kDefaultFdStep) {
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(std::span<const double>(x));
    x[i] = xi - h;
    const double fm = f(std::span<const double>(x));
    x[i] = xi;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace hessborn
