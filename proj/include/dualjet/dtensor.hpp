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
 * @file dtensor.hpp
 * @brief Dense d-tensor containers with tagged index slots.
 *
 * Storage convention: entries are stored row-major with slots in the order
 * the component symbol lists them. Christoffel-type objects put their plain
 * upper index first (Gamma^k_ij is [k][i][j], frak_R^r_kij is [r][k][i][j]).
 * Objects whose upper indices are parenthesized momentum-type indices put the
 * lower group first (N2_{(i)j}^{(a)} is [i][j][a], C_{i(c)}^{j(k)} is
 * [i][c][j][k]). Torsion and curvature cells follow the column-then-row
 * layout documented in torsion_curvature.hpp. The slot labels carried by the
 * signature are emitted in reports, so no reader has to guess.
 */

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dualjet/tape.hpp"

namespace dualjet {

enum class SlotKind : std::uint8_t { Spatial, Temporal };
enum class Variance : std::uint8_t { Upper, Lower };

struct Slot {
  SlotKind kind;
  Variance variance;
  std::string label;
  bool paired = false;  // parenthesized momentum-type index, e.g. (k)

  friend bool operator==(const Slot&, const Slot&) = default;

  /// "^k", "_(c)", ...
  std::string describe() const {
    std::string s(1, variance == Variance::Upper ? '^' : '_');
    s += paired ? "(" + label + ")" : label;
    return s;
  }
};

inline Slot up_s(std::string label, bool paired = false) { return {SlotKind::Spatial, Variance::Upper, std::move(label), paired}; }
inline Slot lo_s(std::string label, bool paired = false) { return {SlotKind::Spatial, Variance::Lower, std::move(label), paired}; }
inline Slot up_t(std::string label, bool paired = false) { return {SlotKind::Temporal, Variance::Upper, std::move(label), paired}; }
inline Slot lo_t(std::string label, bool paired = false) { return {SlotKind::Temporal, Variance::Lower, std::move(label), paired}; }

class IndexSig {
 public:
  IndexSig() = default;
  IndexSig(std::initializer_list<Slot> slots) : slots_(slots) {}
  explicit IndexSig(std::vector<Slot> slots) : slots_(std::move(slots)) {}

  std::size_t rank() const noexcept { return slots_.size(); }
  const Slot& operator[](std::size_t k) const { return slots_[k]; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  IndexSig appended(std::span<const Slot> extra) const {
    std::vector<Slot> s = slots_;
    s.insert(s.end(), extra.begin(), extra.end());
    return IndexSig(std::move(s));
  }

  std::vector<int> dims(const ChartSpec& chart) const {
    std::vector<int> d;
    for (const Slot& s : slots_) d.push_back(s.kind == SlotKind::Spatial ? chart.n() : chart.m());
    return d;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const Slot& s : slots_) out.push_back(s.describe());
    return out;
  }

  friend bool operator==(const IndexSig&, const IndexSig&) = default;

 private:
  std::vector<Slot> slots_;
};

/// Dense multi-index array with a slot signature.
template <class Value>
class BasicTensor {
 public:
  BasicTensor() = default;
  BasicTensor(IndexSig sig, std::vector<int> dims, Value fill = Value{})
      : sig_(std::move(sig)), dims_(std::move(dims)) {
    std::size_t count = 1;
    for (int d : dims_) count *= static_cast<std::size_t>(d);
    entries_.assign(count, fill);
  }
  BasicTensor(const ChartSpec& chart, IndexSig sig, Value fill = Value{})
      : BasicTensor(sig, sig.dims(chart), fill) {}

  const IndexSig& sig() const noexcept { return sig_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const Value> entries() const noexcept { return entries_; }
  std::span<Value> entries() noexcept { return entries_; }

  std::size_t offset(std::span<const int> idx) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) off = off * dims_[k] + idx[k];
    return off;
  }

  Value& at(std::span<const int> idx) { return entries_[offset(idx)]; }
  const Value& at(std::span<const int> idx) const { return entries_[offset(idx)]; }

  template <class... I>
  Value& operator()(I... idx) {
    const int k[] = {static_cast<int>(idx)...};
    return entries_[offset(k)];
  }
  template <class... I>
  const Value& operator()(I... idx) const {
    const int k[] = {static_cast<int>(idx)...};
    return entries_[offset(k)];
  }

  /// Multi-index of the entry stored at `off`.
  std::vector<int> index_of(std::size_t off) const {
    std::vector<int> idx(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      idx[k] = static_cast<int>(off % dims_[k]);
      off /= dims_[k];
    }
    return idx;
  }

  /// Calls f(index) for every multi-index in storage order.
  template <class F>
  void for_each_index(F&& f) const {
    std::vector<int> idx(dims_.size(), 0);
    for (std::size_t n = 0; n < entries_.size(); ++n) {
      f(std::span<const int>(idx));
      for (std::size_t k = dims_.size(); k-- > 0;) {
        if (++idx[k] < dims_[k]) break;
        idx[k] = 0;
      }
    }
  }

 private:
  IndexSig sig_;
  std::vector<int> dims_;
  std::vector<Value> entries_;
};

using DTensor = BasicTensor<Expr>;
using NumericTensor = BasicTensor<double>;

inline double max_abs(const NumericTensor& t) {
  double m = 0.0;
  for (double v : t.entries()) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const NumericTensor& a, const NumericTensor& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

/// Entrywise a - b; both must share dims.
inline DTensor operator-(const DTensor& a, const DTensor& b) {
  DTensor out = a;
  for (std::size_t k = 0; k < a.size(); ++k) out.entries()[k] = a.entries()[k] - b.entries()[k];
  return out;
}

inline DTensor negated(const DTensor& a) {
  DTensor out = a;
  for (Expr& e : out.entries()) e = -e;
  return out;
}

inline bool is_structurally_zero(const DTensor& t) {
  return std::all_of(t.entries().begin(), t.entries().end(), [](Expr e) { return e.is_zero(); });
}

/// Compiles several tensors into one tape and evaluates them together.
class TensorEvaluator {
 public:
  TensorEvaluator(std::span<const DTensor* const> tensors, const ChartSpec& chart) : chart_(chart) {
    std::vector<Expr> roots;
    for (const DTensor* t : tensors) {
      shapes_.push_back(NumericTensor(t->sig(), t->dims()));
      roots.insert(roots.end(), t->entries().begin(), t->entries().end());
    }
    tape_.emplace(roots, chart);
  }
  TensorEvaluator(std::initializer_list<const DTensor*> tensors, const ChartSpec& chart)
      : TensorEvaluator(std::span<const DTensor* const>(tensors.begin(), tensors.size()), chart) {}

  std::vector<NumericTensor> evaluate(const Point& pt) const { return evaluate_flat(pt.flatten(chart_)); }

  std::vector<NumericTensor> evaluate_flat(std::span<const double> vars) const {
    const std::vector<double> flat = tape_->evaluate(vars);
    std::vector<NumericTensor> out = shapes_;
    std::size_t pos = 0;
    for (NumericTensor& t : out)
      for (double& v : t.entries()) v = flat[pos++];
    return out;
  }

 private:
  ChartSpec chart_;
  std::vector<NumericTensor> shapes_;
  std::optional<Tape> tape_;
};

inline NumericTensor evaluate(const DTensor& t, const Point& pt, const ChartSpec& chart) {
  return TensorEvaluator({&t}, chart).evaluate(pt)[0];
}

}  // namespace dualjet
