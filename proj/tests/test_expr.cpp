// Copyright 2026 The dualjet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

namespace dualjet {
namespace {

using testing::numeric_derivative;

const ChartSpec kChart(1, 2);

double eval_at(const std::string& src, const std::vector<double>& flat) {
  const Expr roots[] = {parse_scalar(src, kChart)};
  return Tape(roots, kChart).evaluate(flat)[0];
}

TEST(Parser, EvaluatesArithmeticAndPrecedence) {
  const std::vector<double> flat = {2.0, 3.0, 5.0, 0.5, -0.25};
  EXPECT_DOUBLE_EQ(eval_at("1 + 2*3", flat), 7.0);
  EXPECT_DOUBLE_EQ(eval_at("(1 + 2)*3", flat), 9.0);
  EXPECT_DOUBLE_EQ(eval_at("-x1^2", flat), -9.0);
  EXPECT_DOUBLE_EQ(eval_at("t1/x2 - p1_1", flat), 2.0 / 5.0 - 0.5);
  EXPECT_DOUBLE_EQ(eval_at("x1^-1", flat), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(eval_at("2.5e-1*x2", flat), 1.25);
  EXPECT_DOUBLE_EQ(eval_at("sqrt(x1*x1) + neg(p2_1)", flat), 3.25);
  EXPECT_NEAR(eval_at("exp(log(x2)) + sin(t1)^2 + cos(t1)^2", flat), 6.0, 1e-15);
}

TEST(Parser, DanglingOperatorReportsOffset) {
  try {
    parse_scalar("x1 +", kChart);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Parser, RejectsMalformedInput) {
  EXPECT_THROW(parse_scalar("", kChart), ParseError);
  EXPECT_THROW(parse_scalar("(x1", kChart), ParseError);
  EXPECT_THROW(parse_scalar("x1 x2", kChart), ParseError);
  EXPECT_THROW(parse_scalar("x1^t1", kChart), ParseError);
  EXPECT_THROW(parse_scalar("sin x1", kChart), ParseError);
  EXPECT_THROW(parse_scalar("2 * $", kChart), ParseError);
}

TEST(Parser, UnknownVariableNamesTheIdentifier) {
  try {
    parse_scalar("x1 + x3", kChart);
    FAIL() << "expected an unknown-variable error";
  } catch (const UnknownVariableError& e) {
    EXPECT_EQ(e.name(), "x3");
  }
  EXPECT_THROW(parse_scalar("p1_2", kChart), UnknownVariableError);
  EXPECT_THROW(parse_scalar("t2", kChart), UnknownVariableError);
}

TEST(Expr, StructurallyEqualExpressionsShareOneNode) {
  EXPECT_EQ(parse_scalar("sin(x1)*x2 + t1", kChart), parse_scalar("sin(x1) * x2 + t1", kChart));
  const Expr a = parse_scalar("x1*x2", kChart);
  const Expr b = parse_scalar("x2*x1", kChart);
  EXPECT_EQ(a, b) << "commutative operands are canonically ordered";
}

TEST(Expr, ConstantFoldingAndIdentities) {
  const Expr x(kChart.x(0));
  EXPECT_TRUE((x * 0.0).is_zero());
  EXPECT_EQ(x * 1.0, x);
  EXPECT_EQ(x + 0.0, x);
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_TRUE((Expr(2.0) * Expr(3.0)).is_constant(6.0));
  EXPECT_EQ(-(-x), x);
}

TEST(Differentiate, SineDerivativeAtPointThree) {
  const Expr e = parse_scalar("sin(x1)", kChart);
  const Expr d = differentiate(e, kChart.x(0));
  const std::vector<double> flat = {0.0, 0.3, 0.0, 0.0, 0.0};
  const Expr roots[] = {d};
  EXPECT_NEAR(Tape(roots, kChart).evaluate(flat)[0], 0.955336, 1e-6);
  EXPECT_NEAR(Tape(roots, kChart).evaluate(flat)[0], std::cos(0.3), 1e-15);
}

TEST(Differentiate, MatchesNumericDerivativeOnEveryPrimitive) {
  const char* sources[] = {"x1^3 - 2*x1*x2",     "sin(x1*x2)",       "cos(t1 + x1)",     "exp(x2*p1_1)",
                           "log(1 + x1^2)",      "sqrt(2 + x2)",     "x1/(1 + x2^2)",    "(x1 + t1)^-2",
                           "neg(p2_1)*x1^0.5",   "t1^2*(exp(t1)*p1_1^2 + x1^2*p2_1^2)"};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.3, 1.3);
  for (const char* src : sources) {
    const Expr e = parse_scalar(src, kChart);
    for (int s = 0; s < 10; ++s) {
      std::vector<double> flat(kChart.num_vars());
      for (double& v : flat) v = u(rng);
      for (int k = 0; k < kChart.num_vars(); ++k) {
        const Expr d = differentiate(e, Var{k});
        const Expr roots[] = {d};
        const double sym = Tape(roots, kChart).evaluate(flat)[0];
        EXPECT_NEAR(sym, numeric_derivative(e, flat, Var{k}, kChart), 1e-7 * std::max(1.0, std::abs(sym)))
            << src << " d/d" << kChart.name(Var{k});
      }
    }
  }
}

TEST(Differentiate, LeibnizRule) {
  const Expr f = parse_scalar("sin(x1)*x2 + t1", kChart);
  const Expr g = parse_scalar("exp(p1_1) / (1 + x1^2)", kChart);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < kChart.num_vars(); ++k) {
    const Var v{k};
    const Expr lhs = differentiate(f * g, v);
    const Expr rhs = differentiate(f, v) * g + f * differentiate(g, v);
    const Expr roots[] = {lhs, rhs};
    const Tape tape(roots, kChart);
    for (int s = 0; s < 20; ++s) {
      std::vector<double> flat(kChart.num_vars());
      for (double& x : flat) x = u(rng);
      const auto out = tape.evaluate(flat);
      EXPECT_NEAR(out[0], out[1], 1e-13);
    }
  }
}

TEST(Differentiate, MixedPartialsCommute) {
  const Expr e = parse_scalar("exp(x1*x2)*sin(t1*p2_1) + x1^3*p1_1", kChart);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int a = 0; a < kChart.num_vars(); ++a)
    for (int b = a + 1; b < kChart.num_vars(); ++b) {
      const Expr roots[] = {differentiate(differentiate(e, Var{a}), Var{b}),
                            differentiate(differentiate(e, Var{b}), Var{a})};
      const Tape tape(roots, kChart);
      std::vector<double> flat(kChart.num_vars());
      for (double& x : flat) x = u(rng);
      const auto out = tape.evaluate(flat);
      EXPECT_NEAR(out[0], out[1], 1e-12);
    }
}

TEST(Differentiate, IsMemoized) {
  const Expr e = parse_scalar("sin(x1)^3 * exp(x2)", kChart);
  EXPECT_EQ(differentiate(e, kChart.x(0)), differentiate(e, kChart.x(0)));
}

TEST(DerivativeRecorder, RecordsEveryCallInScope) {
  const Expr e = parse_scalar("x1*x2", kChart);
  std::vector<std::pair<Expr, Var>> calls;
  {
    DerivativeRecorder rec;
    differentiate(e, kChart.x(0));
    differentiate(e, kChart.t(0));
    calls = rec.calls();
  }
  differentiate(e, kChart.x(1));
  ASSERT_EQ(calls.size(), 2u);
  EXPECT_EQ(calls[0].first, e);
  EXPECT_EQ(calls[1].second.index, kChart.t(0).index);
}

TEST(Printer, RoundTripsThroughTheParser) {
  const char* sources[] = {"x1^3 - 2*x1*x2", "sin(x1*x2)/(t1 - 4)", "neg(p2_1)*x1^0.5 - (-3)", "exp(-x2)^-2"};
  const std::vector<double> flat = {0.7, 1.1, 0.4, -0.3, 0.9};
  for (const char* src : sources) {
    const Expr e = parse_scalar(src, kChart);
    const std::string printed = to_string(e, kChart);
    EXPECT_EQ(parse_scalar(printed, kChart), e) << printed;
    EXPECT_DOUBLE_EQ(eval_at(printed, flat), eval_at(src, flat));
  }
}

TEST(Substitute, ReplacesVariables) {
  const Expr e = parse_scalar("x1*p1_1 + p2_1^2 + t1", kChart);
  std::map<Var, Expr> zero;
  zero.emplace(kChart.p(0, 0), Expr(0.0));
  zero.emplace(kChart.p(1, 0), Expr(0.0));
  EXPECT_EQ(substitute(e, zero), Expr(kChart.t(0)));
}

TEST(Tape, DomainErrorsNameTheSubexpression) {
  const std::vector<double> flat = {0.0, -1.0, 0.0, 0.0, 0.0};
  try {
    eval_at("2 + log(x1)", flat);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subexpression(), "log(x1)");
  }
  EXPECT_THROW(eval_at("1/x2", flat), DomainError);
  EXPECT_THROW(eval_at("sqrt(x1)", flat), DomainError);
  EXPECT_THROW(eval_at("x1^0.5", flat), DomainError);
}

TEST(Tape, SharesSubexpressionsAcrossOutputs) {
  const Expr common = parse_scalar("sin(x1*x2)", kChart);
  const Expr roots[] = {common + 1.0, common * 2.0};
  const Tape tape(roots, kChart);
  EXPECT_LE(tape.num_instructions(), 8u);
  const auto out = tape.evaluate(std::vector<double>{0.0, 0.5, 2.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(out[0], std::sin(1.0) + 1.0);
  EXPECT_DOUBLE_EQ(out[1], 2.0 * std::sin(1.0));
}

TEST(Chart, VariableNamesAndOrder) {
  const ChartSpec c(2, 3);
  EXPECT_EQ(c.num_vars(), 11);
  EXPECT_EQ(c.name(c.t(1)), "t2");
  EXPECT_EQ(c.name(c.x(2)), "x3");
  EXPECT_EQ(c.name(c.p(2, 1)), "p3_2");
  EXPECT_EQ(c.p(2, 1).index, 2 + 3 + 1 * 3 + 2);
  EXPECT_EQ(c.lookup("p3_2")->index, c.p(2, 1).index);
  EXPECT_FALSE(c.lookup("p4_1").has_value());
}

}  // namespace
}  // namespace dualjet
