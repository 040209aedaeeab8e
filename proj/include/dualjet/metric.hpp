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
#include <vector>

#include "dualjet/dtensor.hpp"

namespace dualjet {

/// Threshold below which |det| counts as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-12;

namespace detail {

inline Expr determinant(const std::vector<std::vector<Expr>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Expr det;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[0][col].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(a[r][c]);
      minor.push_back(std::move(row));
    }
    const Expr term = a[0][col] * determinant(minor);
    det = col % 2 == 0 ? det + term : det - term;
  }
  return det;
}

inline std::vector<std::vector<Expr>> as_matrix(const DTensor& t) {
  if (t.rank() != 2 || t.dims()[0] != t.dims()[1])
    throw ConfigError("matrix", "expected a square rank-2 tensor");
  const int n = t.dims()[0];
  if (n > ChartSpec::kMaxDim) throw ConfigError("matrix", "dimension above 4");
  std::vector<std::vector<Expr>> a(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = t(i, j);
  return a;
}

inline Slot flipped(Slot s) {
  s.variance = s.variance == Variance::Upper ? Variance::Lower : Variance::Upper;
  return s;
}

}  // namespace detail

inline Expr symbolic_determinant(const DTensor& m) { return detail::determinant(detail::as_matrix(m)); }

inline bool is_symmetric(const DTensor& m) {
  for (int i = 0; i < m.dims()[0]; ++i)
    for (int j = i + 1; j < m.dims()[0]; ++j)
      if (!(m(i, j) == m(j, i))) return false;
  return true;
}

/// Adjugate-over-determinant inverse of a symmetric matrix of expressions.
/// Diagonal inputs are inverted entrywise. Slot variances are flipped.
inline DTensor symbolic_inverse(const DTensor& m) {
  const auto a = detail::as_matrix(m);
  if (!is_symmetric(m)) throw ConfigError("matrix", "symbolic_inverse expects a symmetric matrix");
  const int n = static_cast<int>(a.size());
  DTensor inv(IndexSig{detail::flipped(m.sig()[0]), detail::flipped(m.sig()[1])}, m.dims());

  bool diagonal = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !a[i][j].is_zero()) diagonal = false;
  if (diagonal) {
    for (int i = 0; i < n; ++i) inv(i, i) = 1.0 / a[i][i];
    return inv;
  }

  const Expr det = detail::determinant(a);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // cofactor C_ji; equals C_ij for symmetric input
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        for (int c = 0; c < n; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      Expr cof = n == 1 ? Expr(1.0) : detail::determinant(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv(i, j) = cof / det;
      inv(j, i) = inv(i, j);
    }
  }
  return inv;
}

/// A symmetric metric with both index positions. `determinant` is the
/// determinant of whichever form was supplied and is the quantity checked
/// for degeneracy at evaluation time.
struct MetricField {
  DTensor lower;
  DTensor upper;
  Expr determinant;

  static MetricField from_lower(DTensor lower) {
    if (!is_symmetric(lower)) throw ConfigError("metric", "lower metric is not symmetric");
    MetricField f;
    f.upper = symbolic_inverse(lower);
    f.determinant = symbolic_determinant(lower);
    f.lower = std::move(lower);
    return f;
  }

  static MetricField from_upper(DTensor upper) {
    if (!is_symmetric(upper)) throw ConfigError("metric", "upper metric is not symmetric");
    MetricField f;
    f.lower = symbolic_inverse(upper);
    f.determinant = symbolic_determinant(upper);
    f.upper = std::move(upper);
    return f;
  }

  int dim() const { return lower.dims()[0]; }
};

inline DTensor temporal_matrix(const ChartSpec& chart, Variance v, std::string a = "a", std::string b = "b") {
  const IndexSig sig = v == Variance::Lower ? IndexSig{lo_t(a), lo_t(b)} : IndexSig{up_t(a), up_t(b)};
  return DTensor(chart, sig);
}

inline DTensor spatial_matrix(const ChartSpec& chart, Variance v, std::string i = "i", std::string j = "j") {
  const IndexSig sig = v == Variance::Lower ? IndexSig{lo_s(i), lo_s(j)} : IndexSig{up_s(i), up_s(j)};
  return DTensor(chart, sig);
}

/// Throws DegenerateMetricError when |det| falls below the threshold.
inline void check_nondegenerate(double det, const std::string& what) {
  if (!(std::abs(det) >= kDegeneracyThreshold))
    throw DegenerateMetricError("degenerate " + what + " (|det| = " + format_number(std::abs(det)) + ")");
}

// ---------------------------------------------------------------------------
// Christoffel symbols and their curvature tensors

/// chi^a_bc = (h^ad / 2)(dh_db/dt^c + dh_dc/dt^b - dh_bc/dt^d), stored [a][b][c].
inline DTensor temporal_christoffel(const MetricField& h, const ChartSpec& chart) {
  const int m = chart.m();
  DTensor chi(chart, IndexSig{up_t("a"), lo_t("b"), lo_t("c")});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        Expr sum;
        for (int d = 0; d < m; ++d) {
          if (h.upper(a, d).is_zero()) continue;
          const Expr bracket = differentiate(h.lower(d, b), chart.t(c)) + differentiate(h.lower(d, c), chart.t(b)) -
                               differentiate(h.lower(b, c), chart.t(d));
          sum += h.upper(a, d) * bracket;
        }
        chi(a, b, c) = 0.5 * sum;
      }
  return chi;
}

/// Gamma^k_ij = (g^kl / 2)(dg_li/dx^j + dg_lj/dx^i - dg_ij/dx^l), stored [k][i][j].
inline DTensor spatial_christoffel(const MetricField& g, const ChartSpec& chart) {
  const int n = chart.n();
  DTensor gamma(chart, IndexSig{up_s("k"), lo_s("i"), lo_s("j")});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr sum;
        for (int l = 0; l < n; ++l) {
          if (g.upper(k, l).is_zero()) continue;
          const Expr bracket = differentiate(g.lower(l, i), chart.x(j)) + differentiate(g.lower(l, j), chart.x(i)) -
                               differentiate(g.lower(i, j), chart.x(l));
          sum += g.upper(k, l) * bracket;
        }
        gamma(k, i, j) = 0.5 * sum;
      }
  return gamma;
}

namespace detail {

/// K^r_kij = dL^r_ki/dy^j - dL^r_kj/dy^i + L^p_ki L^r_pj - L^p_kj L^r_pi for a
/// connection L^r_ki stored [r][k][i] whose last index ranges over the
/// coordinates `direction`.
inline DTensor christoffel_curvature(const DTensor& conn, const std::vector<Var>& direction, IndexSig sig,
                                     const ChartSpec& chart) {
  const int n = conn.dims()[0];
  DTensor out(chart, std::move(sig));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          Expr v = differentiate(conn(r, k, i), direction[j]) - differentiate(conn(r, k, j), direction[i]);
          for (int p = 0; p < n; ++p) v += conn(p, k, i) * conn(r, p, j) - conn(p, k, j) * conn(r, p, i);
          out(r, k, i, j) = v;
        }
  return out;
}

}  // namespace detail

/// frak_R^r_kij built from Gamma, stored [r][k][i][j].
inline DTensor christoffel_curvature_spatial(const DTensor& gamma, const ChartSpec& chart) {
  std::vector<Var> dir;
  for (int i = 0; i < chart.n(); ++i) dir.push_back(chart.x(i));
  return detail::christoffel_curvature(gamma, dir, IndexSig{up_s("r"), lo_s("k"), lo_s("i"), lo_s("j")}, chart);
}

/// chi^d_abc built from chi, stored [d][a][b][c].
inline DTensor christoffel_curvature_temporal(const DTensor& chi, const ChartSpec& chart) {
  std::vector<Var> dir;
  for (int a = 0; a < chart.m(); ++a) dir.push_back(chart.t(a));
  return detail::christoffel_curvature(chi, dir, IndexSig{up_t("d"), lo_t("a"), lo_t("b"), lo_t("c")}, chart);
}

}  // namespace dualjet
