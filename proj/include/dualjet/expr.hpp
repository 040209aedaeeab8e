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

/**
 * @file expr.hpp
 * @brief Hash-consed scalar expression DAG over chart variables.
 *
 * Every node is interned in a process-wide pool, so two structurally equal
 * expressions are the same node and `operator==` is pointer equality.
 * Builders apply constant folding only (0*x, 1*x, x+0, x-x, ...); operands
 * of + and * are stored in a canonical order, which never changes the value
 * computed because a single IEEE addition or multiplication is commutative.
 * Nodes are never freed.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dualjet/chart.hpp"

namespace dualjet {

enum class Op : std::uint8_t { Const, Variable, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

inline bool is_unary(Op op) noexcept { return op >= Op::Neg && op <= Op::Sqrt; }
inline bool is_binary(Op op) noexcept { return op >= Op::Add && op <= Op::Div; }

struct Node {
  Op op;
  int var;       // Variable
  double value;  // Const value or Pow exponent
  const Node* lhs;
  const Node* rhs;
  std::uint64_t id;
};

namespace detail {

struct NodeKey {
  Op op;
  int var;
  std::uint64_t bits;
  const Node* lhs;
  const Node* rhs;
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint64_t>(k.op));
    mix(static_cast<std::uint64_t>(k.var));
    mix(k.bits);
    mix(reinterpret_cast<std::uintptr_t>(k.lhs));
    mix(reinterpret_cast<std::uintptr_t>(k.rhs));
    return static_cast<std::size_t>(h);
  }
};

struct DerivKey {
  const Node* node;
  int var;
  friend bool operator==(const DerivKey&, const DerivKey&) = default;
};

struct DerivKeyHash {
  std::size_t operator()(const DerivKey& k) const noexcept {
    return std::hash<const void*>{}(k.node) * 31u + static_cast<std::size_t>(k.var);
  }
};

class NodePool {
 public:
  static NodePool& instance() {
    static NodePool pool;
    return pool;
  }

  const Node* intern(Op op, int var, double value, const Node* lhs, const Node* rhs) {
    if (value == 0.0) value = 0.0;  // fold -0.0
    const NodeKey key{op, var, std::bit_cast<std::uint64_t>(value), lhs, rhs};
    std::lock_guard lock(mutex_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    nodes_.push_back(Node{op, var, value, lhs, rhs, nodes_.size()});
    const Node* node = &nodes_.back();
    table_.emplace(key, node);
    return node;
  }

  const Node* find_derivative(const Node* node, int var) const {
    std::lock_guard lock(mutex_);
    auto it = derivatives_.find({node, var});
    return it == derivatives_.end() ? nullptr : it->second;
  }

  void store_derivative(const Node* node, int var, const Node* result) {
    std::lock_guard lock(mutex_);
    derivatives_.emplace(DerivKey{node, var}, result);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return nodes_.size();
  }

 private:
  NodePool() = default;
  mutable std::mutex mutex_;
  std::deque<Node> nodes_;
  std::unordered_map<NodeKey, const Node*, NodeKeyHash> table_;
  std::unordered_map<DerivKey, const Node*, DerivKeyHash> derivatives_;
};

}  // namespace detail

/// Handle to an immutable interned expression node. Cheap to copy.
class Expr {
 public:
  Expr() : Expr(0.0) {}
  explicit Expr(double constant)
      : node_(detail::NodePool::instance().intern(Op::Const, -1, constant, nullptr, nullptr)) {}
  explicit Expr(Var v) : node_(detail::NodePool::instance().intern(Op::Variable, v.index, 0.0, nullptr, nullptr)) {}

  static Expr from_node(const Node* node) noexcept { return Expr(node); }

  const Node* node() const noexcept { return node_; }
  Op op() const noexcept { return node_->op; }
  bool is_constant() const noexcept { return node_->op == Op::Const; }
  bool is_constant(double v) const noexcept { return is_constant() && node_->value == v; }
  bool is_zero() const noexcept { return is_constant(0.0); }
  double constant_value() const noexcept { return node_->value; }
  double exponent() const noexcept { return node_->value; }
  Var variable() const noexcept { return {node_->var}; }
  Expr lhs() const noexcept { return Expr(node_->lhs); }
  Expr rhs() const noexcept { return Expr(node_->rhs); }

  friend bool operator==(Expr a, Expr b) noexcept { return a.node_ == b.node_; }

 private:
  explicit Expr(const Node* node) noexcept : node_(node) {}
  const Node* node_;
};

namespace detail {

inline Expr make(Op op, int var, double value, Expr lhs, Expr rhs) {
  return Expr::from_node(NodePool::instance().intern(op, var, value, lhs.node(), rhs.node()));
}
inline Expr make_unary(Op op, Expr arg) {
  return Expr::from_node(NodePool::instance().intern(op, -1, 0.0, arg.node(), nullptr));
}
inline Expr make_binary(Op op, Expr lhs, Expr rhs) {
  if (op == Op::Add || op == Op::Mul) {
    // constants first, then creation order
    const bool swap = (!lhs.is_constant() && rhs.is_constant()) ||
                      (lhs.is_constant() == rhs.is_constant() && rhs.node()->id < lhs.node()->id);
    if (swap) std::swap(lhs, rhs);
  }
  return Expr::from_node(NodePool::instance().intern(op, -1, 0.0, lhs.node(), rhs.node()));
}

inline std::optional<double> fold_value(double v) {
  if (std::isfinite(v)) return v;
  return std::nullopt;
}

}  // namespace detail

inline Expr operator-(Expr a) {
  if (a.is_constant()) return Expr(-a.constant_value());
  if (a.op() == Op::Neg) return a.lhs();
  return detail::make_unary(Op::Neg, a);
}

inline Expr operator+(Expr a, Expr b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() + b.constant_value());
  return detail::make_binary(Op::Add, a, b);
}

inline Expr operator-(Expr a, Expr b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a == b) return Expr(0.0);
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() - b.constant_value());
  return detail::make_binary(Op::Sub, a, b);
}

inline Expr operator*(Expr a, Expr b) {
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() * b.constant_value());
  return detail::make_binary(Op::Mul, a, b);
}

inline Expr operator/(Expr a, Expr b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_zero() && !b.is_zero()) return Expr(0.0);
  if (a.is_constant() && b.is_constant() && !b.is_zero())
    if (auto v = detail::fold_value(a.constant_value() / b.constant_value())) return Expr(*v);
  return detail::make_binary(Op::Div, a, b);
}

inline Expr operator+(Expr a, double b) { return a + Expr(b); }
inline Expr operator+(double a, Expr b) { return Expr(a) + b; }
inline Expr operator-(Expr a, double b) { return a - Expr(b); }
inline Expr operator-(double a, Expr b) { return Expr(a) - b; }
inline Expr operator*(Expr a, double b) { return a * Expr(b); }
inline Expr operator*(double a, Expr b) { return Expr(a) * b; }
inline Expr operator/(Expr a, double b) { return a / Expr(b); }
inline Expr operator/(double a, Expr b) { return Expr(a) / b; }

inline Expr& operator+=(Expr& a, Expr b) { return a = a + b; }
inline Expr& operator-=(Expr& a, Expr b) { return a = a - b; }

/// u^c for a constant real exponent c.
inline Expr pow(Expr base, double exponent) {
  if (exponent == 0.0) return Expr(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant())
    if (auto v = detail::fold_value(std::pow(base.constant_value(), exponent))) return Expr(*v);
  return detail::make(Op::Pow, -1, exponent, base, Expr::from_node(nullptr));
}

#define DUALJET_UNARY(name, op_tag, fn)                                               \
  inline Expr name(Expr a) {                                                          \
    if (a.is_constant())                                                              \
      if (auto v = detail::fold_value(fn(a.constant_value()))) return Expr(*v);       \
    return detail::make_unary(op_tag, a);                                             \
  }
DUALJET_UNARY(sin, Op::Sin, std::sin)
DUALJET_UNARY(cos, Op::Cos, std::cos)
DUALJET_UNARY(exp, Op::Exp, std::exp)
#undef DUALJET_UNARY

inline Expr log(Expr a) {
  if (a.is_constant() && a.constant_value() > 0.0) return Expr(std::log(a.constant_value()));
  return detail::make_unary(Op::Log, a);
}

inline Expr sqrt(Expr a) {
  if (a.is_constant() && a.constant_value() >= 0.0) return Expr(std::sqrt(a.constant_value()));
  return detail::make_unary(Op::Sqrt, a);
}

// ---------------------------------------------------------------------------
// Differentiation

namespace detail {

inline Expr derivative_node(Expr e, int var);

inline Expr derivative_uncached(Expr e, int var) {
  switch (e.op()) {
    case Op::Const:
      return Expr(0.0);
    case Op::Variable:
      return Expr(e.variable().index == var ? 1.0 : 0.0);
    case Op::Neg:
      return -derivative_node(e.lhs(), var);
    case Op::Sin:
      return cos(e.lhs()) * derivative_node(e.lhs(), var);
    case Op::Cos:
      return -(sin(e.lhs()) * derivative_node(e.lhs(), var));
    case Op::Exp:
      return e * derivative_node(e.lhs(), var);
    case Op::Log:
      return derivative_node(e.lhs(), var) / e.lhs();
    case Op::Sqrt: {
      const Expr du = derivative_node(e.lhs(), var);
      if (du.is_zero()) return du;
      return du / (2.0 * e);
    }
    case Op::Add:
      return derivative_node(e.lhs(), var) + derivative_node(e.rhs(), var);
    case Op::Sub:
      return derivative_node(e.lhs(), var) - derivative_node(e.rhs(), var);
    case Op::Mul:
      return derivative_node(e.lhs(), var) * e.rhs() + e.lhs() * derivative_node(e.rhs(), var);
    case Op::Div: {
      // (u/v)' = (u' - (u/v) v') / v
      const Expr du = derivative_node(e.lhs(), var);
      const Expr dv = derivative_node(e.rhs(), var);
      if (dv.is_zero()) return du / e.rhs();
      return (du - e * dv) / e.rhs();
    }
    case Op::Pow: {
      const Expr du = derivative_node(e.lhs(), var);
      if (du.is_zero()) return du;
      const double c = e.exponent();
      return (c * pow(e.lhs(), c - 1.0)) * du;
    }
  }
  return Expr(0.0);
}

inline Expr derivative_node(Expr e, int var) {
  auto& pool = NodePool::instance();
  if (const Node* hit = pool.find_derivative(e.node(), var)) return Expr::from_node(hit);
  const Expr result = derivative_uncached(e, var);
  pool.store_derivative(e.node(), var, result.node());
  return result;
}

inline thread_local std::vector<std::pair<Expr, Var>>* derivative_log = nullptr;

}  // namespace detail

/// Exact partial derivative of `e` with respect to `v`.
inline Expr differentiate(Expr e, Var v) {
  if (detail::derivative_log) detail::derivative_log->emplace_back(e, v);
  return detail::derivative_node(e, v.index);
}

/// Records every top-level `differentiate` call made on this thread while
/// alive, so a verifier can replay them against finite differences.
class DerivativeRecorder {
 public:
  DerivativeRecorder() : previous_(detail::derivative_log) { detail::derivative_log = &calls_; }
  ~DerivativeRecorder() { detail::derivative_log = previous_; }
  DerivativeRecorder(const DerivativeRecorder&) = delete;
  DerivativeRecorder& operator=(const DerivativeRecorder&) = delete;

  /// Distinct (expression, variable) pairs in first-seen order.
  std::vector<std::pair<Expr, Var>> calls() const {
    std::vector<std::pair<Expr, Var>> out;
    std::set<std::pair<std::uint64_t, int>> seen;
    for (const auto& [e, v] : calls_)
      if (seen.insert({e.node()->id, v.index}).second) out.emplace_back(e, v);
    return out;
  }

 private:
  std::vector<std::pair<Expr, Var>>* previous_;
  std::vector<std::pair<Expr, Var>> calls_;
};

// ---------------------------------------------------------------------------
// Structural queries

/// Calls `visit` once for every distinct node reachable from `roots`,
/// children before parents.
template <class Visit>
void for_each_node(std::span<const Expr> roots, Visit&& visit) {
  std::unordered_map<const Node*, bool> done;
  std::vector<std::pair<const Node*, bool>> stack;
  for (Expr root : roots) {
    stack.emplace_back(root.node(), false);
    while (!stack.empty()) {
      auto [node, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        visit(node);
        continue;
      }
      if (!done.emplace(node, true).second) continue;
      stack.emplace_back(node, true);
      if (node->rhs && node->op != Op::Pow) stack.emplace_back(node->rhs, false);
      if (node->lhs) stack.emplace_back(node->lhs, false);
    }
  }
}

inline std::set<Var> free_variables(Expr e) {
  std::set<Var> vars;
  const Expr roots[] = {e};
  for_each_node(roots, [&](const Node* n) {
    if (n->op == Op::Variable) vars.insert(Var{n->var});
  });
  return vars;
}

inline bool depends_on(Expr e, const ChartSpec& chart, VarKind kind) {
  for (Var v : free_variables(e))
    if (chart.kind(v) == kind) return true;
  return false;
}

inline std::size_t dag_size(std::span<const Expr> roots) {
  std::size_t count = 0;
  for_each_node(roots, [&](const Node*) { ++count; });
  return count;
}

/// Replaces variables by expressions; unmapped variables are kept.
inline Expr substitute(Expr e, const std::map<Var, Expr>& replacement) {
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(Expr)> go = [&](Expr x) -> Expr {
    if (auto it = memo.find(x.node()); it != memo.end()) return it->second;
    Expr out;
    switch (x.op()) {
      case Op::Const:
        out = x;
        break;
      case Op::Variable: {
        auto it = replacement.find(x.variable());
        out = it == replacement.end() ? x : it->second;
        break;
      }
      case Op::Neg: out = -go(x.lhs()); break;
      case Op::Sin: out = sin(go(x.lhs())); break;
      case Op::Cos: out = cos(go(x.lhs())); break;
      case Op::Exp: out = exp(go(x.lhs())); break;
      case Op::Log: out = log(go(x.lhs())); break;
      case Op::Sqrt: out = sqrt(go(x.lhs())); break;
      case Op::Add: out = go(x.lhs()) + go(x.rhs()); break;
      case Op::Sub: out = go(x.lhs()) - go(x.rhs()); break;
      case Op::Mul: out = go(x.lhs()) * go(x.rhs()); break;
      case Op::Div: out = go(x.lhs()) / go(x.rhs()); break;
      case Op::Pow: out = pow(go(x.lhs()), x.exponent()); break;
    }
    memo.emplace(x.node(), out);
    return out;
  };
  return go(e);
}

// ---------------------------------------------------------------------------
// Printing

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "";
  }
}

/// Prints `e` in the input grammar; parsing the output reproduces `e`.
/// Output longer than `max_length` characters is truncated with "...".
inline std::string to_string(Expr e, const ChartSpec& chart, std::size_t max_length = std::string::npos) {
  std::string out;
  std::function<void(Expr)> emit = [&](Expr x) {
    if (out.size() > max_length) return;
    switch (x.op()) {
      case Op::Const:
        if (x.constant_value() < 0.0)
          out += "neg(" + format_number(-x.constant_value()) + ")";
        else
          out += format_number(x.constant_value());
        return;
      case Op::Variable:
        out += chart.name(x.variable());
        return;
      case Op::Pow: {
        const bool wrap = x.lhs().op() != Op::Variable && !is_unary(x.lhs().op());
        if (wrap) out += '(';
        emit(x.lhs());
        if (wrap) out += ')';
        out += '^';
        out += format_number(x.exponent());
        return;
      }
      default:
        break;
    }
    if (is_unary(x.op())) {
      out += function_name(x.op());
      out += '(';
      emit(x.lhs());
      out += ')';
      return;
    }
    static constexpr char symbols[] = {'+', '-', '*', '/'};
    const char symbol = symbols[static_cast<int>(x.op()) - static_cast<int>(Op::Add)];
    for (int side = 0; side < 2; ++side) {
      const Expr child = side == 0 ? x.lhs() : x.rhs();
      const bool wrap = is_binary(child.op()) || child.op() == Op::Pow;
      if (wrap) out += '(';
      emit(child);
      if (wrap) out += ')';
      if (side == 0) out += symbol;
    }
  };
  emit(e);
  if (out.size() > max_length) out = out.substr(0, max_length) + "...";
  return out;
}

}  // namespace dualjet
