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
 * @file cartan.hpp
 * @brief Adapted derivatives, the generalized Cartan canonical connection and
 *        its three covariant derivatives.
 *
 * Adapted derivatives:
 *
 *   d/dt^a (adapted) = d/dt^a - N1_(k)a^(b) d/dp_k^b
 *   d/dx^i (adapted) = d/dx^i - N2_(k)i^(b) d/dp_k^b
 *
 * This is the sign for which the adapted frame transforms as a frame under
 * the nonlinear-connection transformation law (whose inhomogeneous term is
 * -dp~/dt, -dp~/dx), and the only one for which the m = 1 torsion formulas
 * R_(r)1j, R_(r)ij agree with the m >= 2 formulas on electrodynamic spaces.
 *
 * Covariant derivatives act slot by slot. Temporal slots receive chi terms in
 * the "/c" direction and nothing in the "|k" and vertical directions; spatial
 * slots receive A, H and C respectively. The vertical derivative of a tensor
 * appends two slots, the upper spatial (k) and the lower temporal (c).
 */

#include "dualjet/hamilton_space.hpp"

namespace dualjet {

/// Adapted temporal derivative along t^a.
inline Expr adapted_delta_temporal(Expr e, int a, const NonlinearConnection& N, const ChartSpec& chart) {
  Expr out = differentiate(e, chart.t(a));
  for (int k = 0; k < chart.n(); ++k)
    for (int b = 0; b < chart.m(); ++b) {
      const Expr dp = differentiate(e, chart.p(k, b));
      if (!dp.is_zero()) out -= N.temporal(k, a, b) * dp;
    }
  return out;
}

/// Adapted spatial derivative along x^i.
inline Expr adapted_delta_spatial(Expr e, int i, const NonlinearConnection& N, const ChartSpec& chart) {
  Expr out = differentiate(e, chart.x(i));
  for (int k = 0; k < chart.n(); ++k)
    for (int b = 0; b < chart.m(); ++b) {
      const Expr dp = differentiate(e, chart.p(k, b));
      if (!dp.is_zero()) out -= N.spatial(k, i, b) * dp;
    }
  return out;
}

/// Coefficients (chi^a_bc, A^i_jc, H^i_jk, C_i(c)^j(k)) of the connection.
struct CartanCoefficients {
  DTensor temporal;            // chi^a_bc, [a][b][c]
  DTensor spatial_temporal;    // A^i_jc,   [i][j][c]
  DTensor spatial_horizontal;  // H^i_jk,   [i][j][k]
  DTensor spatial_vertical;    // C_i(c)^j(k), [i][c][j][k]
};

inline IndexSig spatial_vertical_sig() { return IndexSig{lo_s("i"), lo_t("c", true), up_s("j"), up_s("k", true)}; }

/// Coefficients from their defining adapted-derivative formulas, for any m:
///   A^i_jc = (g^il/2) dg_lj/dt^c (adapted)
///   H^i_jk = (g^ir/2)(dg_jr/dx^k + dg_kr/dx^j - dg_jk/dx^r) (adapted)
///   C_i(c)^j(k) = -(g_ir/2)(dg^jr/dp_k^c + dg^kr/dp_j^c - dg^jk/dp_r^c)
inline CartanCoefficients cartan_coefficients_full(const HamiltonSpace& space, const NonlinearConnection& N) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  const MetricField& g = space.spatial_metric();

  DTensor dt(c, IndexSig{lo_s("l"), lo_s("j"), lo_t("c")});
  DTensor dx(c, IndexSig{lo_s("j"), lo_s("r"), lo_s("k")});
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < m; ++a) dt(l, j, a) = adapted_delta_temporal(g.lower(l, j), a, N, c);
      for (int k = 0; k < n; ++k) dx(l, j, k) = adapted_delta_spatial(g.lower(l, j), k, N, c);
    }

  CartanCoefficients out{temporal_christoffel(space.temporal_metric(), c),
                         DTensor(c, IndexSig{up_s("i"), lo_s("j"), lo_t("c")}),
                         DTensor(c, IndexSig{up_s("i"), lo_s("j"), lo_s("k")}), DTensor(c, spatial_vertical_sig())};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < m; ++a) {
        Expr sum;
        for (int l = 0; l < n; ++l) sum += g.upper(i, l) * dt(l, j, a);
        out.spatial_temporal(i, j, a) = 0.5 * sum;
      }
      for (int k = 0; k < n; ++k) {
        Expr sum;
        for (int r = 0; r < n; ++r) sum += g.upper(i, r) * (dx(j, r, k) + dx(k, r, j) - dx(j, k, r));
        out.spatial_horizontal(i, j, k) = 0.5 * sum;
      }
    }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr sum;
          for (int r = 0; r < n; ++r) {
            const Expr bracket = differentiate(g.upper(j, r), c.p(k, a)) + differentiate(g.upper(k, r), c.p(j, a)) -
                                 differentiate(g.upper(j, k), c.p(r, a));
            sum += g.lower(i, r) * bracket;
          }
          out.spatial_vertical(i, a, j, k) = -0.5 * sum;
        }
  return out;
}

/// Reduced coefficients valid when g does not depend on the momenta:
/// A^i_jc = (g^il/2) dg_lj/dt^c, H = Gamma, C = 0.
inline CartanCoefficients cartan_coefficients_reduced(const HamiltonSpace& space) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  const MetricField& g = space.spatial_metric();
  CartanCoefficients out{temporal_christoffel(space.temporal_metric(), c),
                         DTensor(c, IndexSig{up_s("i"), lo_s("j"), lo_t("c")}),
                         spatial_christoffel(g, c), DTensor(c, spatial_vertical_sig())};
  out.spatial_horizontal = DTensor(IndexSig{up_s("i"), lo_s("j"), lo_s("k")}, out.spatial_horizontal.dims());
  const DTensor gamma = spatial_christoffel(g, c);
  for (std::size_t k = 0; k < gamma.size(); ++k) out.spatial_horizontal.entries()[k] = gamma.entries()[k];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < m; ++a) {
        Expr sum;
        for (int l = 0; l < n; ++l) sum += g.upper(i, l) * differentiate(g.lower(l, j), c.t(a));
        out.spatial_temporal(i, j, a) = 0.5 * sum;
      }
  return out;
}

/// The connection coefficients the pipeline uses: the full formulas for
/// m = 1 and the reduced ones for m >= 2 (where g never depends on p).
inline CartanCoefficients cartan_coefficients(const HamiltonSpace& space, const NonlinearConnection& N) {
  return space.chart().m() == 1 ? cartan_coefficients_full(space, N) : cartan_coefficients_reduced(space);
}

enum class CovariantKind { TemporalH, SpatialH, Vertical };

inline const char* describe(CovariantKind kind) {
  switch (kind) {
    case CovariantKind::TemporalH: return "/c";
    case CovariantKind::SpatialH: return "|k";
    case CovariantKind::Vertical: return "|^(k)_(c)";
  }
  return "";
}

/// Covariant derivative of a d-tensor. The new slot(s) are appended: "c"
/// (lower temporal) for TemporalH, "k" (lower spatial) for SpatialH, and
/// "(k)" upper spatial followed by "(c)" lower temporal for Vertical.
inline DTensor covariant_derivative(const DTensor& t, CovariantKind kind, const CartanCoefficients& co,
                                    const NonlinearConnection& N, const ChartSpec& chart) {
  std::vector<Slot> extra;
  switch (kind) {
    case CovariantKind::TemporalH: extra = {lo_t("c")}; break;
    case CovariantKind::SpatialH: extra = {lo_s("k")}; break;
    case CovariantKind::Vertical: extra = {up_s("k", true), lo_t("c", true)}; break;
  }
  const IndexSig& sig = t.sig();
  DTensor out(chart, sig.appended(extra));
  const std::size_t rank = t.rank();

  out.for_each_index([&](std::span<const int> full) {
    const std::span<const int> idx = full.first(rank);
    const Expr scalar = t.at(idx);
    Expr v;
    switch (kind) {
      case CovariantKind::TemporalH: v = adapted_delta_temporal(scalar, full[rank], N, chart); break;
      case CovariantKind::SpatialH: v = adapted_delta_spatial(scalar, full[rank], N, chart); break;
      case CovariantKind::Vertical: v = differentiate(scalar, chart.p(full[rank], full[rank + 1])); break;
    }
    std::vector<int> moved(idx.begin(), idx.end());
    for (std::size_t s = 0; s < rank; ++s) {
      const Slot& slot = sig[s];
      const bool upper = slot.variance == Variance::Upper;
      const int own = idx[s];
      const int range = slot.kind == SlotKind::Spatial ? chart.n() : chart.m();
      for (int r = 0; r < range; ++r) {
        moved[s] = r;
        const Expr other = t.at(moved);
        if (other.is_zero()) continue;
        Expr coeff;
        if (slot.kind == SlotKind::Temporal) {
          if (kind != CovariantKind::TemporalH) continue;
          coeff = upper ? co.temporal(own, r, full[rank]) : co.temporal(r, own, full[rank]);
        } else {
          switch (kind) {
            case CovariantKind::TemporalH:
              coeff = upper ? co.spatial_temporal(own, r, full[rank]) : co.spatial_temporal(r, own, full[rank]);
              break;
            case CovariantKind::SpatialH:
              coeff = upper ? co.spatial_horizontal(own, r, full[rank]) : co.spatial_horizontal(r, own, full[rank]);
              break;
            case CovariantKind::Vertical: {
              const int k = full[rank], c = full[rank + 1];
              coeff = upper ? co.spatial_vertical(r, c, own, k) : co.spatial_vertical(own, c, r, k);
              break;
            }
          }
        }
        if (upper)
          v += coeff * other;
        else
          v -= coeff * other;
      }
      moved[s] = own;
    }
    out.at(full) = v;
  });
  return out;
}

}  // namespace dualjet
