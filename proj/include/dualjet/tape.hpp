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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "dualjet/expr.hpp"

namespace dualjet {

/// A set of expressions flattened into one straight-line program. Shared
/// subexpressions are evaluated once per call.
class Tape {
 public:
  Tape(std::span<const Expr> roots, ChartSpec chart) : chart_(chart) {
    std::unordered_map<const Node*, std::uint32_t> slot;
    for_each_node(roots, [&](const Node* n) {
      Instr in{n->op, 0, 0, n->value, n->var, n};
      if (n->lhs) in.a = slot.at(n->lhs);
      if (n->rhs && n->op != Op::Pow) in.b = slot.at(n->rhs);
      slot.emplace(n, static_cast<std::uint32_t>(code_.size()));
      code_.push_back(in);
    });
    outputs_.reserve(roots.size());
    for (Expr r : roots) outputs_.push_back(slot.at(r.node()));
  }

  const ChartSpec& chart() const noexcept { return chart_; }
  std::size_t num_outputs() const noexcept { return outputs_.size(); }
  std::size_t num_instructions() const noexcept { return code_.size(); }

  /// Evaluates every root at the flattened chart coordinates `vars`.
  /// Throws DomainError naming the first offending subexpression.
  void evaluate(std::span<const double> vars, std::span<double> out) const {
    std::vector<double> reg(code_.size());
    for (std::size_t k = 0; k < code_.size(); ++k) {
      const Instr& in = code_[k];
      const double a = reg[in.a];
      const double b = reg[in.b];
      double r = 0.0;
      switch (in.op) {
        case Op::Const: r = in.value; break;
        case Op::Variable: r = vars[in.var]; break;
        case Op::Neg: r = -a; break;
        case Op::Sin: r = std::sin(a); break;
        case Op::Cos: r = std::cos(a); break;
        case Op::Exp: r = std::exp(a); break;
        case Op::Log:
          if (!(a > 0.0)) fail("log of non-positive value", in);
          r = std::log(a);
          break;
        case Op::Sqrt:
          if (!(a >= 0.0)) fail("sqrt of negative value", in);
          r = std::sqrt(a);
          break;
        case Op::Add: r = a + b; break;
        case Op::Sub: r = a - b; break;
        case Op::Mul: r = a * b; break;
        case Op::Div:
          if (b == 0.0) fail("division by zero", in);
          r = a / b;
          break;
        case Op::Pow:
          if (a < 0.0 && in.value != std::floor(in.value)) fail("non-integer power of negative value", in);
          if (a == 0.0 && in.value < 0.0) fail("negative power of zero", in);
          r = std::pow(a, in.value);
          break;
      }
      if (!std::isfinite(r)) fail("non-finite value", in);
      reg[k] = r;
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
  }

  std::vector<double> evaluate(std::span<const double> vars) const {
    std::vector<double> out(outputs_.size());
    evaluate(vars, out);
    return out;
  }

  std::vector<double> evaluate(const Point& pt) const { return evaluate(pt.flatten(chart_)); }

 private:
  struct Instr {
    Op op;
    std::uint32_t a;
    std::uint32_t b;
    double value;
    int var;
    const Node* node;
  };

  [[noreturn]] void fail(const char* what, const Instr& in) const {
    throw DomainError(std::string("domain error: ") + what, to_string(Expr::from_node(in.node), chart_, 160));
  }

  ChartSpec chart_;
  std::vector<Instr> code_;
  std::vector<std::uint32_t> outputs_;
};

/// Evaluates a single expression at a point.
inline double evaluate(Expr e, const Point& pt, const ChartSpec& chart) {
  const Expr roots[] = {e};
  return Tape(roots, chart).evaluate(pt)[0];
}

}  // namespace dualjet
