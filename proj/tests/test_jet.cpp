// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hessborn/jet.hpp"

using hessborn::Jet;
using hessborn::seed;

namespace {

std::vector<double> vec(std::initializer_list<double> v) { return v; }

}  // namespace

TEST(JetSeed, SingleVariableValueAndSlope) {
  const auto xs = seed(vec({3.0}), 1);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_EQ(xs[0].value(), 3.0);
  EXPECT_EQ(xs[0].partial({0}), 1.0);
}

TEST(JetSeed, CrossVariableSecondPartialIsZero) {
  const auto xs = seed(vec({1.0, 2.0}), 2);
  EXPECT_EQ(xs[0].partial({1, 1}), 0.0);
  EXPECT_EQ(xs[0].partial({1}), 0.0);
  EXPECT_EQ(xs[1].partial({1}), 1.0);
}

TEST(JetSeed, RejectsUnsupportedOrders) {
  EXPECT_THROW(seed(vec({1.0}), 0), std::invalid_argument);
  EXPECT_THROW(seed(vec({1.0}), hessborn::kMaxJetOrder + 1), std::invalid_argument);
  EXPECT_THROW(seed(std::vector<double>{}, 1), std::invalid_argument);
}

TEST(JetArith, ProductRule) {
  const auto x = seed(vec({3.0}), 1)[0];
  EXPECT_DOUBLE_EQ((x * x).partial({0}), 6.0);
}

TEST(JetArith, Bilinearity) {
  const auto xs = seed(vec({2.0, 5.0}), 1);
  const Jet f = xs[0] * xs[1];
  EXPECT_DOUBLE_EQ(f.partial({0}), 5.0);
  EXPECT_DOUBLE_EQ(f.partial({1}), 2.0);
}

TEST(JetArith, QuotientMatchesClosedForm) {
  const auto xs = seed(vec({2.0, 3.0}), 2);
  const Jet q = xs[0] / xs[1];
  EXPECT_NEAR(q.partial({0}), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(q.partial({1}), -2.0 / 9.0, 1e-15);
  EXPECT_NEAR(q.partial({1, 1}), 4.0 / 27.0, 1e-15);
  EXPECT_NEAR(q.partial({0, 1}), -1.0 / 9.0, 1e-15);
}

TEST(JetArith, DivisionByZeroIsDomainError) {
  const auto x = seed(vec({0.0}), 1)[0];
  EXPECT_THROW(Jet(1.0) / x, std::domain_error);
}

TEST(JetArith, LayoutMismatchThrows) {
  const auto a = seed(vec({1.0}), 1)[0];
  const auto b = seed(vec({1.0}), 2)[0];
  const auto c = seed(vec({1.0, 2.0}), 1)[0];
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(a * c, std::invalid_argument);
}

TEST(JetArith, ConstantsPromote) {
  const auto x = seed(vec({2.0}), 2)[0];
  const Jet f = 3.0 * x + 1.0;
  EXPECT_EQ(f.value(), 7.0);
  EXPECT_EQ(f.partial({0}), 3.0);
  EXPECT_EQ(f.partial({0, 0}), 0.0);
}

TEST(JetElementary, ExpAtZero) {
  const auto e = hessborn::exp(seed(vec({0.0}), 2)[0]);
  EXPECT_DOUBLE_EQ(e.value(), 1.0);
  EXPECT_DOUBLE_EQ(e.partial({0}), 1.0);
  EXPECT_DOUBLE_EQ(e.partial({0, 0}), 1.0);
}

TEST(JetElementary, SinAtZero) { EXPECT_DOUBLE_EQ(hessborn::sin(seed(vec({0.0}), 1)[0]).partial({0}), 1.0); }

TEST(JetElementary, DomainErrors) {
  const auto neg = seed(vec({-1.0}), 1)[0];
  EXPECT_THROW(hessborn::log(neg), std::domain_error);
  EXPECT_THROW(hessborn::sqrt(neg), std::domain_error);
  EXPECT_THROW(hessborn::pow(neg, 0.5), std::domain_error);
  EXPECT_NO_THROW(hessborn::pow(neg, 3.0));
}

TEST(JetElementary, IntegerPowerOfNegative) {
  const auto x = seed(vec({-2.0}), 3)[0];
  const Jet c = hessborn::pow(x, 3.0);
  EXPECT_DOUBLE_EQ(c.value(), -8.0);
  EXPECT_DOUBLE_EQ(c.partial({0}), 12.0);
  EXPECT_DOUBLE_EQ(c.partial({0, 0}), -12.0);
  EXPECT_DOUBLE_EQ(c.partial({0, 0, 0}), 6.0);
}

// Each derivative order k is checked against a central difference of the
// order k-1 partial taken from jets seeded at shifted points.
TEST(JetElementary, HigherDerivativesMatchDifferencedLowerOrder) {
  using F = Jet (*)(const Jet&);
  const std::vector<std::pair<F, double>> cases = {
      {[](const Jet& x) { return hessborn::sin(x); }, 0.7},
      {[](const Jet& x) { return hessborn::cos(x); }, -0.4},
      {[](const Jet& x) { return hessborn::exp(x); }, 0.3},
      {[](const Jet& x) { return hessborn::log(x); }, 1.7},
      {[](const Jet& x) { return hessborn::sqrt(x); }, 2.2},
      {[](const Jet& x) { return hessborn::tanh(x); }, 0.45},
      {[](const Jet& x) { return hessborn::pow(x, 2.5); }, 1.3},
      {[](const Jet& x) { return hessborn::reciprocal(x); }, 0.8},
  };
  const int top = hessborn::kMaxJetOrder;
  for (const auto& [f, x0] : cases) {
    for (int k = 1; k <= top; ++k) {
      std::vector<int> lower(k - 1, 0), full(k, 0);
      auto at = [&](double x) { return f(seed(vec({x}), top)[0]).partial(lower); };
      const double h = 1e-4;
      const double fd = (at(x0 + h) - at(x0 - h)) / (2 * h);
      const double jet = f(seed(vec({x0}), top)[0]).partial(full);
      EXPECT_NEAR(jet, fd, 1e-6 * std::max(1.0, std::abs(jet))) << "order " << k << " at " << x0;
    }
  }
}

TEST(JetSchwarz, MixedPartialsShareStorage) {
  const auto xs = seed(vec({0.3, -0.2, 1.1}), 3);
  const Jet f = hessborn::sin(xs[0] * xs[1]) * hessborn::exp(xs[2] * xs[0]) + xs[1] * xs[1] * xs[2];
  const std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const double ref = f.partial(perms[0]);
  for (const auto& p : perms) EXPECT_EQ(f.partial(p), ref);
  EXPECT_EQ(f.partial({0, 1}), f.partial({1, 0}));
  EXPECT_EQ(f.partial({2, 0}), f.partial({0, 2}));
}

TEST(JetArith, AssociativeAndCommutativeOnValues) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto xs = seed(vec({U(rng), U(rng), U(rng)}), 2);
    const Jet &a = xs[0], &b = xs[1], &c = xs[2];
    const Jet lhs = (a * b) * c, rhs = a * (b * c);
    const Jet s1 = (a + b) + c, s2 = a + (b + c);
    for (int i = 0; i < 10; ++i) {
      EXPECT_NEAR(lhs.coefficient(i), rhs.coefficient(i), 1e-12);
      EXPECT_NEAR(s1.coefficient(i), s2.coefficient(i), 1e-12);
      EXPECT_NEAR((a * b).coefficient(i), (b * a).coefficient(i), 1e-12);
    }
  }
}

TEST(JetOps, DerivativeLowersOrder) {
  const auto xs = seed(vec({0.5, 2.0}), 3);
  const Jet f = xs[0] * xs[0] * xs[1];
  const Jet df = f.derivative(0);
  EXPECT_EQ(df.order(), 2);
  EXPECT_DOUBLE_EQ(df.value(), 2 * 0.5 * 2.0);
  EXPECT_DOUBLE_EQ(df.partial({0}), 4.0);
  EXPECT_DOUBLE_EQ(df.partial({0, 1}), 2.0);
  EXPECT_THROW(f.truncated(4), std::invalid_argument);
  const Jet t = f.truncated(1);
  EXPECT_EQ(t.order(), 1);
  EXPECT_DOUBLE_EQ(t.partial({1}), 0.25);
}

TEST(JetOps, ComposeIsTheChainRule) {
  // f(u, v) = sin(u) * v expanded at (0.4, 1.5); u = a*b, v = a + b.
  const std::vector<double> centre{0.4, 1.5};
  const auto uv = seed(centre, 3);
  const Jet f = hessborn::sin(uv[0]) * uv[1];
  const std::vector<double> ab{0.8, 0.5};
  const auto s = seed(ab, 3);
  const std::vector<Jet> args{s[0] * s[1], s[0] + s[1] + Jet(0.2)};
  const Jet composed = hessborn::compose(f, centre, args);
  const Jet direct = hessborn::sin(args[0]) * args[1];
  ASSERT_EQ(composed.layout(), direct.layout());
  for (int i = 0; i < direct.layout()->size(); ++i) EXPECT_NEAR(composed.coefficient(i), direct.coefficient(i), 1e-13);
}

TEST(FdOracle, QuadraticIsExact) {
  const auto g = hessborn::fd_gradient([](std::span<const double> x) { return x[0] * x[0]; }, vec({3.0}), 1e-5);
  EXPECT_NEAR(g[0], 6.0, 1e-9);
}

TEST(FdOracle, ExpAtZeroMatchesJet) {
  const auto g = hessborn::fd_gradient([](std::span<const double> x) { return std::exp(x[0]); }, vec({0.0}));
  const double jet = hessborn::exp(seed(vec({0.0}), 1)[0]).partial({0});
  EXPECT_NEAR(g[0], jet, 1e-10);
}

TEST(FdOracle, SinCriticalPoint) {
  const auto g =
      hessborn::fd_gradient([](std::span<const double> x) { return std::sin(x[0]); }, vec({std::numbers::pi / 2}));
  EXPECT_NEAR(g[0], 0.0, 1e-10);
}

TEST(FdOracle, NaNPropagates) {
  const auto g = hessborn::fd_gradient([](std::span<const double> x) { return std::log(x[0]); }, vec({0.0}));
  EXPECT_TRUE(std::isnan(g[0]));
}
