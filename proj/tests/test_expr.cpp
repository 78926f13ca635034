// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hessborn/expr.hpp"

using hessborn::EvalDomainError;
using hessborn::Expr;
using hessborn::ParseError;

namespace {

const std::vector<std::string> kUV{"u", "v"};

double eval(const std::string& text, std::vector<double> at) { return Expr::parse(text, kUV).evaluate(at); }

std::string parse_error(const std::string& text) {
  try {
    Expr::parse(text, kUV);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

// Expressions shared by the round-trip and derivative checks; all are
// defined on [0.2, 2]^2.
const std::vector<std::string> kCorpus = {
    "u^2 + 2*v",
    "exp(u)",
    "sin(u)^2 + cos(u)^2",
    "u*v - v/u",
    "-u^2 + 3.5",
    "log(u + v) * sqrt(v)",
    "tanh(u - v)^3",
    "(u + 1)^0.5 / (v + 2)",
    "exp(-u*v) + 1.5e-1*u",
    "sin(cos(u) * v) - -v",
    "1 + 4*u^2",
    "-2*u",
};

}  // namespace

TEST(ExprParse, Arithmetic) { EXPECT_DOUBLE_EQ(eval("u^2 + 2*v", {1, 2}), 5.0); }

TEST(ExprParse, ExpAtZero) {
  EXPECT_DOUBLE_EQ(eval("exp(u)", {0, 123.0}), 1.0);
  EXPECT_DOUBLE_EQ(eval("exp(u)", {0, -7.0}), 1.0);
}

TEST(ExprParse, UnknownIdentifier) { EXPECT_EQ(parse_error("w + 1"), "unknown identifier \"w\" at offset 0"); }

TEST(ExprParse, PowerBindsTighterThanUnaryMinus) {
  EXPECT_DOUBLE_EQ(eval("-u^2", {3, 0}), -9.0);
  EXPECT_DOUBLE_EQ(eval("(-u)^2", {3, 0}), 9.0);
  EXPECT_DOUBLE_EQ(eval("2^3", {0, 0}), 8.0);
}

TEST(ExprParse, Precedence) {
  EXPECT_DOUBLE_EQ(eval("1 + 2*3", {0, 0}), 7.0);
  EXPECT_DOUBLE_EQ(eval("8/2/2", {0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(eval("1 - 2 - 3", {0, 0}), -4.0);
  EXPECT_DOUBLE_EQ(eval("2*u^2", {3, 0}), 18.0);
}

TEST(ExprParse, ScientificLiterals) {
  EXPECT_DOUBLE_EQ(eval("1.5e2", {0, 0}), 150.0);
  EXPECT_DOUBLE_EQ(eval("2E-1 + .5", {0, 0}), 0.7);
}

TEST(ExprParse, ArityErrors) {
  EXPECT_NE(parse_error("sin(u, v)").find("arity"), std::string::npos);
  EXPECT_NE(parse_error("sin()").find("arity"), std::string::npos);
  EXPECT_FALSE(parse_error("sin + 1").empty());
}

TEST(ExprParse, VariableExponentRejected) {
  const auto msg = parse_error("u^v");
  EXPECT_NE(msg.find("exponent"), std::string::npos);
  EXPECT_NE(msg.find("offset 2"), std::string::npos);
}

TEST(ExprParse, SyntaxErrorsCarryOffsets) {
  try {
    Expr::parse("u + * v", kUV);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  try {
    Expr::parse("(u + v", kUV);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(Expr::parse("", kUV), ParseError);
  EXPECT_THROW(Expr::parse("u v", kUV), ParseError);
  EXPECT_THROW(Expr::parse("u $ v", kUV), ParseError);
}

TEST(ExprParse, CoordinateNamesValidated) {
  EXPECT_THROW(hessborn::validate_coordinate_names(std::vector<std::string>{}), std::invalid_argument);
  EXPECT_THROW(hessborn::validate_coordinate_names(std::vector<std::string>{"u", "u"}), std::invalid_argument);
  EXPECT_THROW(hessborn::validate_coordinate_names(std::vector<std::string>{"1u"}), std::invalid_argument);
  EXPECT_THROW(hessborn::validate_coordinate_names(std::vector<std::string>{"sin"}), std::invalid_argument);
  EXPECT_NO_THROW(hessborn::validate_coordinate_names(std::vector<std::string>{"x_1", "Theta"}));
}

TEST(ExprEval, ProductRuleThroughJets) {
  const auto xs = hessborn::seed(std::vector<double>{2, 5}, 1);
  const auto j = Expr::parse("u*v", kUV).evaluate(std::span<const hessborn::Jet>(xs));
  EXPECT_DOUBLE_EQ(j.partial({0}), 5.0);
}

TEST(ExprEval, LogDomainReportsNodeOffset) {
  const Expr e = Expr::parse("1 + log(u)", kUV);
  try {
    e.evaluate(std::vector<double>{-1, 0});
    FAIL();
  } catch (const EvalDomainError& err) {
    EXPECT_EQ(err.offset(), 4u);
  }
  const auto xs = hessborn::seed(std::vector<double>{-1, 0}, 1);
  EXPECT_THROW(e.evaluate(std::span<const hessborn::Jet>(xs)), EvalDomainError);
  EXPECT_THROW(Expr::parse("u / v", kUV).evaluate(std::vector<double>{1, 0}), EvalDomainError);
  EXPECT_THROW(Expr::parse("sqrt(v)", kUV).evaluate(std::vector<double>{1, -2}), EvalDomainError);
}

TEST(ExprEval, TrigIdentity) {
  const Expr e = Expr::parse("sin(u)^2 + cos(u)^2", kUV);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(e.evaluate(std::vector<double>{U(rng), 0}), 1.0, 1e-12);
}

TEST(ExprEval, WrongArgumentCount) {
  EXPECT_THROW(Expr::parse("u", kUV).evaluate(std::vector<double>{1}), std::invalid_argument);
}

TEST(ExprFree, Coordinates) {
  EXPECT_EQ(Expr::parse("u^2 + 2*v", kUV).free_coordinates(), (std::set<int>{0, 1}));
  EXPECT_TRUE(Expr::parse("3.5", kUV).free_coordinates().empty());
  EXPECT_EQ(Expr::parse("exp(v)", kUV).free_coordinates(), (std::set<int>{1}));
}

TEST(ExprPrint, RoundTripIsAFixedPoint) {
  for (const auto& text : kCorpus) {
    const std::string once = Expr::parse(text, kUV).to_string();
    const std::string twice = Expr::parse(once, kUV).to_string();
    EXPECT_EQ(once, twice) << text;
    EXPECT_DOUBLE_EQ(Expr::parse(once, kUV).evaluate(std::vector<double>{0.7, 1.3}),
                     Expr::parse(text, kUV).evaluate(std::vector<double>{0.7, 1.3}))
        << text;
  }
}

TEST(ExprPrint, LiteralZero) {
  EXPECT_TRUE(Expr::parse("0", kUV).is_literal_zero());
  EXPECT_TRUE(Expr::parse("-(0.0)", kUV).is_literal_zero());
  EXPECT_FALSE(Expr::parse("u - u", kUV).is_literal_zero());
}

TEST(ExprEval, JetGradientMatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  for (const auto& text : kCorpus) {
    const Expr e = Expr::parse(text, kUV);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> p{U(rng), U(rng)};
      const auto xs = hessborn::seed(p, 1);
      const auto j = e.evaluate(std::span<const hessborn::Jet>(xs));
      const auto fd = hessborn::fd_gradient([&](std::span<const double> x) { return e.evaluate(x); }, p);
      for (int i = 0; i < 2; ++i)
        EXPECT_LE(std::abs(j.partial({i}) - fd[i]) / std::max(1.0, std::abs(j.partial({i}))), 1e-6) << text;
    }
  }
}
