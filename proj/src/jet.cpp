// SPDX-License-Identifier: MIT
#include "hessborn/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hessborn {

namespace {

void enumerate_monomials(int arity, int order, std::vector<MultiIndex>& out) {
  // Degree-major, then lexicographic in (alpha_0, alpha_1, ...) descending,
  // so index 0 is the constant and 1..arity are the first-order terms.
  for (int deg = 0; deg <= order; ++deg) {
    MultiIndex alpha{};
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == arity - 1) {
        alpha[var] = static_cast<std::uint8_t>(remaining);
        out.push_back(alpha);
        alpha[var] = 0;
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        alpha[var] = static_cast<std::uint8_t>(e);
        self(self, var + 1, remaining - e);
      }
      alpha[var] = 0;
    };
    rec(rec, 0, deg);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int arity, int order) : arity_(arity), order_(order) {
  enumerate_monomials(arity, order, exponents_);
  const int n = size();
  degrees_.resize(n);
  weights_.resize(n);
  keys_.resize(n);
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    double w = 1.0;
    for (int v = 0; v < arity; ++v) {
      deg += exponents_[i][v];
      w *= factorial(exponents_[i][v]);
    }
    degrees_[i] = deg;
    weights_[i] = w;
    keys_[i] = key(exponents_[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      MultiIndex sum{};
      for (int v = 0; v < arity; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
      product_.push_back({i, j, index_of(sum)});
    }
  }
  if (order > 0) {
    // Lower-order layout monomials are the prefix of ours (degree-major).
    std::vector<MultiIndex> lower;
    enumerate_monomials(arity, order - 1, lower);
    shifts_.resize(arity);
    for (int v = 0; v < arity; ++v) {
      for (const auto& beta : lower) {
        MultiIndex up = beta;
        up[v] += 1;
        shifts_[v].push_back({index_of(up), static_cast<double>(up[v])});
      }
    }
  }
}

std::uint32_t JetLayout::key(const MultiIndex& alpha) const {
  std::uint32_t k = 0;
  for (int v = arity_ - 1; v >= 0; --v) k = k * static_cast<std::uint32_t>(order_ + 1) + alpha[v];
  return k;
}

int JetLayout::index_of(const MultiIndex& alpha) const {
  int deg = 0;
  for (int v = 0; v < arity_; ++v) deg += alpha[v];
  for (int v = arity_; v < kMaxJetArity; ++v)
    if (alpha[v] != 0) return -1;
  if (deg > order_) return -1;
  const auto k = key(alpha);
  // Monomials of one degree are contiguous; search only that block.
  auto first = std::lower_bound(degrees_.begin(), degrees_.end(), deg);
  for (auto it = first; it != degrees_.end() && *it == deg; ++it) {
    const auto idx = static_cast<int>(it - degrees_.begin());
    if (keys_[idx] == k) return idx;
  }
  return -1;
}

const JetLayout& JetLayout::get(int arity, int order) {
  if (arity < 1 || arity > kMaxJetArity)
    throw std::invalid_argument("jet arity " + std::to_string(arity) + " outside [1, " +
                                std::to_string(kMaxJetArity) + "]");
  if (order < 0 || order > kMaxJetOrder)
    throw std::invalid_argument("jet order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxJetOrder) + "]");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{arity, order}];
  if (!slot) slot.reset(new JetLayout(arity, order));
  return *slot;
}

// ---------------------------------------------------------------------------

Jet Jet::variable(int arity, int order, int index, double value) {
  if (index < 0 || index >= arity) throw std::invalid_argument("jet variable index out of range");
  Jet j = zero(arity, order);
  j.coeffs_[0] = value;
  if (order >= 1) j.coeffs_[1 + index] = 1.0;
  return j;
}

Jet Jet::zero(int arity, int order) {
  Jet j;
  j.layout_ = &JetLayout::get(arity, order);
  j.coeffs_.assign(j.layout_->size(), 0.0);
  return j;
}

int Jet::order() const { return layout_ ? layout_->order() : 0; }
int Jet::arity() const { return layout_ ? layout_->arity() : 0; }

double Jet::partial(std::span<const int> vars) const {
  if (vars.empty()) return value();
  if (!layout_) return 0.0;
  if (static_cast<int>(vars.size()) > layout_->order())
    throw std::invalid_argument("partial of order " + std::to_string(vars.size()) +
                                " exceeds jet order " + std::to_string(layout_->order()));
  MultiIndex alpha{};
  for (int v : vars) {
    if (v < 0 || v >= layout_->arity()) throw std::invalid_argument("partial variable out of range");
    alpha[v] += 1;
  }
  const int idx = layout_->index_of(alpha);
  return coeffs_[idx] * layout_->factorial_weight(idx);
}

Jet Jet::derivative(int var) const {
  if (!layout_) return Jet(0.0);
  if (var < 0 || var >= layout_->arity()) throw std::invalid_argument("derivative variable out of range");
  if (layout_->order() == 0) throw std::invalid_argument("cannot differentiate an order-0 jet");
  Jet out = zero(layout_->arity(), layout_->order() - 1);
  const auto shift = layout_->shift(var);
  for (std::size_t t = 0; t < shift.size(); ++t) out.coeffs_[t] = shift[t].factor * coeffs_[shift[t].src];
  return out;
}

Jet Jet::truncated(int order) const {
  if (!layout_) return *this;
  if (order > layout_->order()) throw std::invalid_argument("cannot raise jet order by truncation");
  if (order == layout_->order()) return *this;
  Jet out = zero(layout_->arity(), order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

void Jet::promote_to(const JetLayout* layout) {
  if (layout_ == layout || layout == nullptr) return;
  const double c = coeffs_[0];
  layout_ = layout;
  coeffs_.assign(layout->size(), 0.0);
  coeffs_[0] = c;
}

const JetLayout* Jet::common_layout(const Jet& a, const Jet& b) {
  if (!a.layout_) return b.layout_;
  if (!b.layout_) return a.layout_;
  if (a.layout_ != b.layout_)
    throw std::invalid_argument("jet layout mismatch: (arity " + std::to_string(a.arity()) + ", order " +
                                std::to_string(a.order()) + ") vs (arity " + std::to_string(b.arity()) +
                                ", order " + std::to_string(b.order()) + ")");
  return a.layout_;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  promote_to(common_layout(*this, rhs));
  if (rhs.layout_)
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  else
    coeffs_[0] += rhs.coeffs_[0];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  promote_to(common_layout(*this, rhs));
  if (rhs.layout_)
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  else
    coeffs_[0] -= rhs.coeffs_[0];
  return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  const JetLayout* layout = Jet::common_layout(lhs, rhs);
  if (!lhs.layout_ || !rhs.layout_) {
    const Jet& scalar = lhs.layout_ ? rhs : lhs;
    Jet out = lhs.layout_ ? lhs : rhs;
    const double s = scalar.coeffs_[0];
    for (auto& c : out.coeffs_) c *= s;
    return out;
  }
  Jet out;
  out.layout_ = layout;
  out.coeffs_.assign(layout->size(), 0.0);
  for (const auto& t : layout->product()) out.coeffs_[t.out] += lhs.coeffs_[t.lhs] * rhs.coeffs_[t.rhs];
  return out;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& lhs, const Jet& rhs) {
  if (rhs.value() == 0.0) throw std::domain_error("division by zero");
  if (!rhs.layout_) {
    Jet out = lhs;
    for (auto& c : out.coeffs_) c /= rhs.coeffs_[0];
    return out;
  }
  return lhs * reciprocal(rhs);
}

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

// ---------------------------------------------------------------------------

std::vector<Jet> seed(std::span<const double> point, int order) {
  if (point.empty()) throw std::invalid_argument("seed: empty point");
  if (order < 1 || order > kMaxJetOrder)
    throw std::invalid_argument("seed: unsupported jet order " + std::to_string(order));
  const int m = static_cast<int>(point.size());
  std::vector<Jet> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) out.push_back(Jet::variable(m, order, i, point[i]));
  return out;
}

Jet apply_taylor(const Jet& x, std::span<const double> derivs) {
  if (!x.layout_) return Jet(derivs[0]);
  const int q = x.order();
  Jet delta = x;
  delta.coeffs_[0] = 0.0;
  Jet out = Jet::zero(x.arity(), q);
  out.coeffs_[0] = derivs[0];
  Jet power = delta;
  double fact = 1.0;
  for (int k = 1; k <= q; ++k) {
    fact *= k;
    const double c = derivs[k] / fact;
    if (c != 0.0)
      for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += c * power.coeffs_[i];
    if (k < q) power = power * delta;
  }
  return out;
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double d[] = {s, c, -s, -c, s, c};
  return apply_taylor(x, d);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double d[] = {c, -s, -c, s, c, -s};
  return apply_taylor(x, d);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  const double d[] = {e, e, e, e, e, e};
  return apply_taylor(x, d);
}

Jet log(const Jet& x) {
  const double a = x.value();
  if (!(a > 0.0)) throw std::domain_error("log of non-positive value");
  const double r = 1.0 / a;
  const double d[] = {std::log(a), r, -r * r, 2 * r * r * r, -6 * r * r * r * r, 24 * r * r * r * r * r};
  return apply_taylor(x, d);
}

Jet sqrt(const Jet& x) {
  const double a = x.value();
  if (!(a > 0.0)) throw std::domain_error("sqrt of non-positive value");
  return pow(x, 0.5);
}

Jet tanh(const Jet& x) {
  const double t = std::tanh(x.value());
  const double s = 1.0 - t * t;
  const double d[] = {t,
                      s,
                      -2.0 * t * s,
                      (-2.0 + 6.0 * t * t) * s,
                      (16.0 * t - 24.0 * t * t * t) * s,
                      (16.0 - 120.0 * t * t + 120.0 * t * t * t * t) * s};
  return apply_taylor(x, d);
}

Jet pow(const Jet& x, double exponent) {
  const double a = x.value();
  const bool integral = std::nearbyint(exponent) == exponent;
  if (!integral && !(a > 0.0)) throw std::domain_error("non-integer power of non-positive value");
  if (integral && exponent < 0.0 && a == 0.0) throw std::domain_error("negative power of zero");
  double d[kMaxJetOrder + 1];
  double falling = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (integral && exponent >= 0.0 && k > exponent)
      d[k] = 0.0;
    else
      d[k] = falling * std::pow(a, exponent - k);
    falling *= exponent - k;
  }
  return apply_taylor(x, d);
}

Jet reciprocal(const Jet& x) {
  const double a = x.value();
  if (a == 0.0) throw std::domain_error("division by zero");
  const double r = 1.0 / a;
  double d[kMaxJetOrder + 1];
  double term = r;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = term;
    term *= -(k + 1) * r;
  }
  return apply_taylor(x, d);
}

Jet abs(const Jet& x) { return x.value() < 0.0 ? -x : x; }

Jet compose(const Jet& f, std::span<const double> centre, std::span<const Jet> args) {
  if (f.is_constant()) return f;
  const JetLayout& fl = *f.layout();
  if (static_cast<int>(args.size()) != fl.arity() || static_cast<int>(centre.size()) != fl.arity())
    throw std::invalid_argument("compose: argument count does not match jet arity");
  const JetLayout* target = nullptr;
  for (const auto& a : args) {
    if (a.is_constant()) continue;
    if (target && target != a.layout()) throw std::invalid_argument("compose: arguments have mixed layouts");
    target = a.layout();
  }
  if (!target) {
    // Plain polynomial evaluation at constant arguments.
    double acc = 0.0;
    for (int idx = 0; idx < fl.size(); ++idx) {
      double term = f.coefficient(idx);
      for (int v = 0; v < fl.arity(); ++v) term *= std::pow(args[v].value() - centre[v], fl.exponent(idx)[v]);
      acc += term;
    }
    return Jet(acc);
  }
  if (fl.order() < target->order())
    throw std::invalid_argument("compose: outer jet order below argument order");
  bool nilpotent = true;
  std::vector<std::vector<Jet>> powers(fl.arity());
  for (int v = 0; v < fl.arity(); ++v) {
    Jet delta = args[v] - Jet(centre[v]);
    if (delta.value() != 0.0) nilpotent = false;
    powers[v].push_back(Jet::zero(target->arity(), target->order()) + Jet(1.0));
    for (int e = 1; e <= fl.order(); ++e) powers[v].push_back(powers[v].back() * delta);
  }
  Jet out = Jet::zero(target->arity(), target->order());
  for (int idx = 0; idx < fl.size(); ++idx) {
    const double c = f.coefficient(idx);
    if (c == 0.0) continue;
    if (nilpotent && fl.degree(idx) > target->order()) continue;
    Jet term(c);
    for (int v = 0; v < fl.arity(); ++v) {
      const int e = fl.exponent(idx)[v];
      if (e > 0) term = term * powers[v][e];
    }
    out += term;
  }
  return out;
}

}  // namespace hessborn
