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

#include <charconv>
#include <cmath>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualjet/errors.hpp"

namespace dualjet {

/// Index of a chart variable. Layout: t^1..t^m, x^1..x^n, then p_i^a with
/// the temporal index a varying slowest.
struct Var {
  int index = 0;
  friend auto operator<=>(Var, Var) = default;
};

enum class VarKind { Temporal, Spatial, Momentum };

/// Local chart (t^a, x^i, p_i^a) of the dual 1-jet space. Variable names are
/// t1..tm, x1..xn and p{i}_{a} (so p2_1 is p_2^1). All indices in the API are
/// 0-based; names are 1-based.
class ChartSpec {
 public:
  static constexpr int kMaxDim = 4;

  ChartSpec(int m, int n) : m_(m), n_(n) {
    if (m < 1 || m > kMaxDim) throw ConfigError("m", "temporal dimension must be in [1, 4]");
    if (n < 1 || n > kMaxDim) throw ConfigError("n", "spatial dimension must be in [1, 4]");
  }

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int num_vars() const noexcept { return m_ + n_ + m_ * n_; }

  Var t(int a) const noexcept { return {a}; }
  Var x(int i) const noexcept { return {m_ + i}; }
  Var p(int i, int a) const noexcept { return {m_ + n_ + a * n_ + i}; }

  VarKind kind(Var v) const noexcept {
    if (v.index < m_) return VarKind::Temporal;
    if (v.index < m_ + n_) return VarKind::Spatial;
    return VarKind::Momentum;
  }

  /// Spatial index of a momentum variable.
  int momentum_spatial(Var v) const noexcept { return (v.index - m_ - n_) % n_; }
  /// Temporal index of a momentum variable.
  int momentum_temporal(Var v) const noexcept { return (v.index - m_ - n_) / n_; }

  bool contains(Var v) const noexcept { return v.index >= 0 && v.index < num_vars(); }

  std::string name(Var v) const {
    switch (kind(v)) {
      case VarKind::Temporal:
        return "t" + std::to_string(v.index + 1);
      case VarKind::Spatial:
        return "x" + std::to_string(v.index - m_ + 1);
      case VarKind::Momentum:
        return "p" + std::to_string(momentum_spatial(v) + 1) + "_" +
               std::to_string(momentum_temporal(v) + 1);
    }
    return {};
  }

  std::optional<Var> lookup(std::string_view name) const {
    auto parse_index = [](std::string_view digits) -> std::optional<int> {
      if (digits.empty()) return std::nullopt;
      int value = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
      return value;
    };
    if (name.size() < 2) return std::nullopt;
    const char head = name.front();
    const std::string_view rest = name.substr(1);
    if (head == 't' || head == 'x') {
      auto k = parse_index(rest);
      const int limit = head == 't' ? m_ : n_;
      if (!k || *k < 1 || *k > limit) return std::nullopt;
      return head == 't' ? t(*k - 1) : x(*k - 1);
    }
    if (head == 'p') {
      const auto sep = rest.find('_');
      if (sep == std::string_view::npos) return std::nullopt;
      auto i = parse_index(rest.substr(0, sep));
      auto a = parse_index(rest.substr(sep + 1));
      if (!i || !a || *i < 1 || *i > n_ || *a < 1 || *a > m_) return std::nullopt;
      return p(*i - 1, *a - 1);
    }
    return std::nullopt;
  }

  friend bool operator==(const ChartSpec&, const ChartSpec&) = default;

 private:
  int m_;
  int n_;
};

/// A point (t, x, p) of the dual 1-jet space; p[a][i] holds p_i^a.
struct Point {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<std::vector<double>> p;

  static Point zeros(const ChartSpec& chart) {
    Point pt;
    pt.t.assign(chart.m(), 0.0);
    pt.x.assign(chart.n(), 0.0);
    pt.p.assign(chart.m(), std::vector<double>(chart.n(), 0.0));
    return pt;
  }

  static Point from_flat(const ChartSpec& chart, std::span<const double> values) {
    Point pt = zeros(chart);
    for (int a = 0; a < chart.m(); ++a) pt.t[a] = values[chart.t(a).index];
    for (int i = 0; i < chart.n(); ++i) pt.x[i] = values[chart.x(i).index];
    for (int a = 0; a < chart.m(); ++a)
      for (int i = 0; i < chart.n(); ++i) pt.p[a][i] = values[chart.p(i, a).index];
    return pt;
  }

  std::vector<double> flatten(const ChartSpec& chart) const {
    validate(chart);
    std::vector<double> values(chart.num_vars());
    for (int a = 0; a < chart.m(); ++a) values[chart.t(a).index] = t[a];
    for (int i = 0; i < chart.n(); ++i) values[chart.x(i).index] = x[i];
    for (int a = 0; a < chart.m(); ++a)
      for (int i = 0; i < chart.n(); ++i) values[chart.p(i, a).index] = p[a][i];
    return values;
  }

  void validate(const ChartSpec& chart) const {
    bool ok = static_cast<int>(t.size()) == chart.m() && static_cast<int>(x.size()) == chart.n() &&
              static_cast<int>(p.size()) == chart.m();
    for (const auto& row : p) ok = ok && static_cast<int>(row.size()) == chart.n();
    if (!ok) throw ConfigError("point", "dimensions do not match the chart");
    auto finite = [](const std::vector<double>& v) {
      for (double d : v)
        if (!std::isfinite(d)) return false;
      return true;
    };
    ok = finite(t) && finite(x);
    for (const auto& row : p) ok = ok && finite(row);
    if (!ok) throw ConfigError("point", "non-finite coordinate");
  }
};

}  // namespace dualjet
