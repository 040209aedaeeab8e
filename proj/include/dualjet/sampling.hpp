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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dualjet/chart.hpp"

namespace dualjet {

struct Interval {
  double lo;
  double hi;
};

/// Per-variable sampling intervals. Defaults: t in [0.5, 1.5],
/// x in [0.5, 1.2], p in [-1, 1].
class SampleBoxes {
 public:
  explicit SampleBoxes(const ChartSpec& chart) : chart_(chart), boxes_(chart.num_vars()) {
    for (int k = 0; k < chart.num_vars(); ++k) {
      switch (chart.kind(Var{k})) {
        case VarKind::Temporal: boxes_[k] = {0.5, 1.5}; break;
        case VarKind::Spatial: boxes_[k] = {0.5, 1.2}; break;
        case VarKind::Momentum: boxes_[k] = {-1.0, 1.0}; break;
      }
    }
  }

  const ChartSpec& chart() const noexcept { return chart_; }
  const Interval& operator[](Var v) const { return boxes_[v.index]; }
  void set(Var v, Interval box) { boxes_[v.index] = box; }
  void set_kind(VarKind kind, Interval box) {
    for (int k = 0; k < chart_.num_vars(); ++k)
      if (chart_.kind(Var{k}) == kind) boxes_[k] = box;
  }

 private:
  ChartSpec chart_;
  std::vector<Interval> boxes_;
};

/// Deterministic uniform sampler. Uses mt19937_64 (whose output sequence is
/// fixed by the standard) and maps 53 random bits to [lo, hi) directly, so
/// results do not depend on the standard library's distributions.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(Interval box) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return box.lo + (box.hi - box.lo) * u;
  }

  std::vector<double> flat_point(const SampleBoxes& boxes) {
    std::vector<double> v(boxes.chart().num_vars());
    for (int k = 0; k < boxes.chart().num_vars(); ++k) v[k] = uniform(boxes[Var{k}]);
    return v;
  }

  Point point(const SampleBoxes& boxes) { return Point::from_flat(boxes.chart(), flat_point(boxes)); }

  std::vector<Point> points(const SampleBoxes& boxes, int count) {
    std::vector<Point> out;
    for (int k = 0; k < count; ++k) out.push_back(point(boxes));
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dualjet
