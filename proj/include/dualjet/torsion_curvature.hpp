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
 * @file torsion_curvature.hpp
 * @brief Local d-torsion and d-curvature tables of the Cartan connection.
 *
 * Both tables have three columns (hT, hM, v) and six rows (hThT, hMhT, vhT,
 * hMhM, vhM, vv). Every one of the 18 cells is materialized as a DTensor
 * whose slots are the column slots followed by the row slots:
 *
 *   torsion columns     hT: ^e        hM: ^r        v: _(r) ^(f)
 *   curvature columns   hT: ^d _a     hM: ^l _i     v: ^(d) ^(i) _(l) _(a)
 *
 *   torsion rows        hThT: _a _b   hMhT: _a _j   vhT: _a ^(j) _(b)
 *                       hMhM: _i _j   vhM: _i ^(j) _(c)
 *                       vv: ^(j) _(b) ^(k) _(c)
 *   curvature rows      hThT: _b _c   hMhT: _b _k   vhT: _b ^(k) _(c)
 *                       hMhM: _j _k   vhM: _j ^(k) _(c)
 *                       vv: ^(j) _(b) ^(k) _(c)
 *
 * So T^r_aj is torsion(hM, hMhT)[r][a][j], R^(f)_(r)ij is
 * torsion(v, hMhM)[r][f][i][j] and frak_R^l_ijk is curvature(hM, hMhM)[l][i][j][k]
 * when m >= 2.
 *
 * Cells that vanish for the Cartan connection are still computed from a
 * formula whenever one exists (antisymmetric parts of chi and H, C-terms,
 * and so on), and are flagged `zero` so the zero-verifier can check them.
 */

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualjet/cartan.hpp"

namespace dualjet {

/// Which set of formulas to use. `Auto` picks by m; the explicit values exist
/// so that the two branches can be compared on spaces where both apply.
enum class Branch { Auto, Single, Multi };

inline constexpr std::array<const char*, 3> kTableColumns = {"hT", "hM", "v"};
inline constexpr std::array<const char*, 6> kTableRows = {"hThT", "hMhT", "vhT", "hMhM", "vhM", "vv"};

struct TableCell {
  std::string column;
  std::string row;
  std::string symbol;  // human-readable name, "0" for zero cells
  DTensor value;
  bool zero = false;
};

class ComponentTable {
 public:
  explicit ComponentTable(std::string family = {}) : family_(std::move(family)) {}

  const std::string& family() const noexcept { return family_; }
  const std::vector<TableCell>& cells() const noexcept { return cells_; }
  std::vector<TableCell>& cells() noexcept { return cells_; }

  void add(TableCell cell) { cells_.push_back(std::move(cell)); }

  const TableCell& at(std::string_view column, std::string_view row) const {
    for (const TableCell& c : cells_)
      if (c.column == column && c.row == row) return c;
    throw std::out_of_range("no table cell " + std::string(column) + "." + std::string(row));
  }
  const DTensor& operator()(std::string_view column, std::string_view row) const { return at(column, row).value; }

  /// "torsion.hM.hMhT" and so on.
  std::string key(const TableCell& c) const { return family_ + "." + c.column + "." + c.row; }

 private:
  std::string family_;
  std::vector<TableCell> cells_;
};

namespace detail {

inline std::vector<Slot> torsion_column_slots(std::string_view col) {
  if (col == "hT") return {up_t("e")};
  if (col == "hM") return {up_s("r")};
  return {lo_s("r", true), up_t("f", true)};
}

inline std::vector<Slot> torsion_row_slots(std::string_view row) {
  if (row == "hThT") return {lo_t("a"), lo_t("b")};
  if (row == "hMhT") return {lo_t("a"), lo_s("j")};
  if (row == "vhT") return {lo_t("a"), up_s("j", true), lo_t("b", true)};
  if (row == "hMhM") return {lo_s("i"), lo_s("j")};
  if (row == "vhM") return {lo_s("i"), up_s("j", true), lo_t("c", true)};
  return {up_s("j", true), lo_t("b", true), up_s("k", true), lo_t("c", true)};
}

inline std::vector<Slot> curvature_column_slots(std::string_view col) {
  if (col == "hT") return {up_t("d"), lo_t("a")};
  if (col == "hM") return {up_s("l"), lo_s("i")};
  return {up_t("d", true), up_s("i", true), lo_s("l", true), lo_t("a", true)};
}

inline std::vector<Slot> curvature_row_slots(std::string_view row) {
  if (row == "hThT") return {lo_t("b"), lo_t("c")};
  if (row == "hMhT") return {lo_t("b"), lo_s("k")};
  if (row == "vhT") return {lo_t("b"), up_s("k", true), lo_t("c", true)};
  if (row == "hMhM") return {lo_s("j"), lo_s("k")};
  if (row == "vhM") return {lo_s("j"), up_s("k", true), lo_t("c", true)};
  return {up_s("j", true), lo_t("b", true), up_s("k", true), lo_t("c", true)};
}

inline DTensor cell_tensor(const ChartSpec& chart, std::vector<Slot> col, const std::vector<Slot>& row) {
  col.insert(col.end(), row.begin(), row.end());
  return DTensor(chart, IndexSig(std::move(col)));
}

inline Expr kronecker(int i, int j) { return Expr(i == j ? 1.0 : 0.0); }

inline Expr momentum(const ChartSpec& c, int i, int a) { return Expr(c.p(i, a)); }

}  // namespace detail

/// Everything the tables are built from. `correction` (the tensor T of the
/// electrodynamic nonlinear connection) is present for electrodynamic bodies.
struct ConnectionData {
  NonlinearConnection N;
  CartanCoefficients coeffs;
  DTensor gamma;               // Gamma^k_ij of g
  DTensor spatial_curvature;   // frak_R^r_kij of Gamma
  DTensor temporal_curvature;  // chi^d_abc of chi
  std::optional<DTensor> correction;
};

inline ConnectionData connection_data(const HamiltonSpace& space, NonlinearConnection N, CartanCoefficients coeffs) {
  const ChartSpec& c = space.chart();
  ConnectionData d{std::move(N), std::move(coeffs), spatial_christoffel(space.spatial_metric(), c), {}, {}, {}};
  d.spatial_curvature = christoffel_curvature_spatial(d.gamma, c);
  d.temporal_curvature = christoffel_curvature_temporal(d.coeffs.temporal, c);
  if (space.electrodynamic_body()) d.correction = electrodynamic_correction(space, d.gamma);
  return d;
}

// ---------------------------------------------------------------------------
// Torsion

/// The torsion table. `Branch::Multi` needs an electrodynamic body.
inline ComponentTable torsion_table(const HamiltonSpace& space, const ConnectionData& d, Branch branch = Branch::Auto) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  if (branch == Branch::Auto) branch = m == 1 ? Branch::Single : Branch::Multi;
  if (branch == Branch::Multi && !d.correction)
    throw ConfigError("body", "the m >= 2 torsion formulas need an electrodynamic body");
  const bool single = branch == Branch::Single;
  const DTensor& chi = d.coeffs.temporal;
  const DTensor& A = d.coeffs.spatial_temporal;
  const DTensor& H = d.coeffs.spatial_horizontal;
  const DTensor& C = d.coeffs.spatial_vertical;
  const DTensor& N1 = d.N.temporal;
  const DTensor& N2 = d.N.spatial;
  using detail::kronecker;
  using detail::momentum;

  ComponentTable table("torsion");
  auto cell = [&](const char* col, const char* row) {
    return detail::cell_tensor(c, detail::torsion_column_slots(col), detail::torsion_row_slots(row));
  };
  auto put = [&](const char* col, const char* row, std::string symbol, DTensor v, bool zero) {
    table.add(TableCell{col, row, zero ? "0" : std::move(symbol), std::move(v), zero});
  };

  // hT column: only the antisymmetric part of chi could contribute.
  for (const char* row : kTableRows) {
    DTensor t = cell("hT", row);
    if (std::string_view(row) == "hThT")
      t.for_each_index([&](std::span<const int> k) { t.at(k) = chi(k[0], k[1], k[2]) - chi(k[0], k[2], k[1]); });
    put("hT", row, "", std::move(t), true);
  }

  // hM column
  {
    put("hM", "hThT", "", cell("hM", "hThT"), true);
    DTensor t = cell("hM", "hMhT");
    t.for_each_index([&](std::span<const int> k) { t.at(k) = -A(k[0], k[2], k[1]); });
    put("hM", "hMhT", "T^r_aj", std::move(t), false);
    put("hM", "vhT", "", cell("hM", "vhT"), true);
    DTensor hh = cell("hM", "hMhM");
    hh.for_each_index([&](std::span<const int> k) { hh.at(k) = H(k[0], k[1], k[2]) - H(k[0], k[2], k[1]); });
    put("hM", "hMhM", "", std::move(hh), true);
    DTensor p = cell("hM", "vhM");  // [r][i][(j)][(c)] = C_i(c)^r(j)
    p.for_each_index([&](std::span<const int> k) { p.at(k) = C(k[1], k[3], k[0], k[2]); });
    put("hM", "vhM", "P^r(j)_i(c)", std::move(p), !single);
    put("hM", "vv", "", cell("hM", "vv"), true);
  }

  // v column
  {
    DTensor ab = cell("v", "hThT");  // [r][f][a][b] = chi^f_gab p_r^g
    ab.for_each_index([&](std::span<const int> k) {
      Expr v;
      for (int g = 0; g < m; ++g) v += d.temporal_curvature(k[1], g, k[2], k[3]) * momentum(c, k[0], g);
      ab.at(k) = v;
    });
    put("v", "hThT", "R^(f)_(r)ab", std::move(ab), single);

    DTensor aj = cell("v", "hMhT");  // [r][f][a][j]
    DTensor pt = cell("v", "vhT");   // [r][f][a][(j)][(b)]
    DTensor ij = cell("v", "hMhM");  // [r][f][i][j]
    DTensor pm = cell("v", "vhM");   // [r][f][i][(j)][(c)]
    if (single) {
      aj.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], a = k[2], j = k[3];
        aj.at(k) = adapted_delta_spatial(N1(r, a, f), j, d.N, c) - adapted_delta_temporal(N2(r, j, f), a, d.N, c);
      });
      pt.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], a = k[2], j = k[3], b = k[4];
        pt.at(k) = differentiate(N1(r, a, f), c.p(j, b)) + kronecker(f, b) * A(j, r, a) - kronecker(j, r) * chi(f, b, a);
      });
      ij.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], i = k[2], j = k[3];
        ij.at(k) = adapted_delta_spatial(N2(r, i, f), j, d.N, c) - adapted_delta_spatial(N2(r, j, f), i, d.N, c);
      });
    } else {
      const DTensor& T = *d.correction;
      const DTensor T_cov = covariant_derivative(T, CovariantKind::SpatialH, d.coeffs, d.N, c);  // [r][i][f][j]
      aj.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], a = k[2], j = k[3];
        Expr v = -differentiate(N2(r, j, f), c.t(a));
        for (int e = 0; e < m; ++e) v -= chi(f, e, a) * T(r, j, e);
        aj.at(k) = v;
      });
      pt.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], a = k[2], j = k[3], b = k[4];
        pt.at(k) = kronecker(f, b) * A(j, r, a);
      });
      ij.for_each_index([&](std::span<const int> k) {
        const int r = k[0], f = k[1], i = k[2], j = k[3];
        Expr v;
        for (int q = 0; q < n; ++q) v -= d.spatial_curvature(q, r, i, j) * momentum(c, q, f);
        ij.at(k) = v + (T_cov(r, i, f, j) - T_cov(r, j, f, i));
      });
    }
    pm.for_each_index([&](std::span<const int> k) {
      const int r = k[0], f = k[1], i = k[2], j = k[3], cc = k[4];
      pm.at(k) = differentiate(N2(r, i, f), c.p(j, cc)) + kronecker(f, cc) * H(j, r, i);
    });
    put("v", "hMhT", "R^(f)_(r)aj", std::move(aj), false);
    put("v", "vhT", "P^(f)(j)_(r)a(b)", std::move(pt), false);
    put("v", "hMhM", "R^(f)_(r)ij", std::move(ij), false);
    put("v", "vhM", "P^(f)(j)_(r)i(c)", std::move(pm), !single);
    put("v", "vv", "", cell("v", "vv"), true);
  }

  // keep the documented row-major order: columns outer, rows inner
  std::vector<TableCell> ordered;
  for (const char* col : kTableColumns)
    for (const char* row : kTableRows) ordered.push_back(table.at(col, row));
  table.cells() = std::move(ordered);
  return table;
}

// ---------------------------------------------------------------------------
// Curvature

namespace detail {

/// The v column of the curvature table from the h columns:
///   v[d][i][l][a][row] = delta^i_l hT[d][a][row] - delta^d_a hM[i][l][row].
inline DTensor vertical_curvature_cell(const DTensor& hT, const DTensor& hM, const std::vector<Slot>& row,
                                       const ChartSpec& c) {
  DTensor out = cell_tensor(c, curvature_column_slots("v"), row);
  out.for_each_index([&](std::span<const int> k) {
    const int d = k[0], i = k[1], l = k[2], a = k[3];
    std::vector<int> t_idx{d, a}, m_idx{i, l};
    t_idx.insert(t_idx.end(), k.begin() + 4, k.end());
    m_idx.insert(m_idx.end(), k.begin() + 4, k.end());
    Expr v;
    if (i == l) v += hT.at(t_idx);
    if (d == a) v -= hM.at(m_idx);
    out.at(k) = v;
  });
  return out;
}

}  // namespace detail

/// The curvature table. The m = 1 formulas (with adapted derivatives and the
/// C-terms) are valid for any m and are used for `Branch::Single`; the reduced
/// m >= 2 formulas are used for `Branch::Multi`.
inline ComponentTable curvature_table(const HamiltonSpace& space, const ConnectionData& d, const ComponentTable& torsion,
                                      Branch branch = Branch::Auto) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  if (branch == Branch::Auto) branch = m == 1 ? Branch::Single : Branch::Multi;
  const bool single = branch == Branch::Single;
  const DTensor& A = d.coeffs.spatial_temporal;
  const DTensor& H = d.coeffs.spatial_horizontal;
  const DTensor& C = d.coeffs.spatial_vertical;
  const NonlinearConnection& N = d.N;

  ComponentTable table("curvature");
  auto cell = [&](const char* col, const char* row) {
    return detail::cell_tensor(c, detail::curvature_column_slots(col), detail::curvature_row_slots(row));
  };

  // hT column: chi^d_abc and structural zeros.
  std::vector<DTensor> hT;
  for (const char* row : kTableRows) {
    if (std::string_view(row) == "hThT") {
      DTensor t = cell("hT", row);
      for (std::size_t k = 0; k < t.size(); ++k) t.entries()[k] = d.temporal_curvature.entries()[k];
      table.add(TableCell{"hT", row, "chi^d_abc", t, false});
      hT.push_back(std::move(t));
    } else {
      table.add(TableCell{"hT", row, "0", cell("hT", row), true});
      hT.push_back(cell("hT", row));
    }
  }

  // hM column
  const DTensor C_t = covariant_derivative(C, CovariantKind::TemporalH, d.coeffs, N, c);  // [i][c][l][k][b]
  const DTensor C_s = covariant_derivative(C, CovariantKind::SpatialH, d.coeffs, N, c);   // [i][c][l][k][j]
  const DTensor& R_aj = torsion("v", "hMhT");  // [r][f][a][j]
  const DTensor& R_ij = torsion("v", "hMhM");  // [r][f][i][j]
  const DTensor& P_aj = torsion("v", "vhT");   // [r][f][a][(j)][(b)]
  const DTensor& P_ij = torsion("v", "vhM");   // [r][f][i][(j)][(c)]

  DTensor bc = cell("hM", "hThT");  // [l][i][b][c]
  bc.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], b = k[2], cc = k[3];
    Expr v = single ? adapted_delta_temporal(A(l, i, b), cc, N, c) - adapted_delta_temporal(A(l, i, cc), b, N, c)
                    : differentiate(A(l, i, b), c.t(cc)) - differentiate(A(l, i, cc), c.t(b));
    for (int r = 0; r < n; ++r) v += A(r, i, b) * A(l, r, cc) - A(r, i, cc) * A(l, r, b);
    bc.at(k) = v;
  });

  DTensor bk = cell("hM", "hMhT");  // [l][i][b][k]
  bk.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], b = k[2], kk = k[3];
    Expr v;
    if (single) {
      v = adapted_delta_spatial(A(l, i, b), kk, N, c) - adapted_delta_temporal(H(l, i, kk), b, N, c);
      for (int r = 0; r < n; ++r) v += A(r, i, b) * H(l, r, kk) - H(r, i, kk) * A(l, r, b);
      for (int r = 0; r < n; ++r)
        for (int e = 0; e < m; ++e) v += C(i, e, l, r) * R_aj(r, e, b, kk);
    } else {
      v = differentiate(A(l, i, b), c.x(kk)) - differentiate(d.gamma(l, i, kk), c.t(b));
      for (int r = 0; r < n; ++r) v += A(r, i, b) * d.gamma(l, r, kk) - d.gamma(r, i, kk) * A(l, r, b);
    }
    bk.at(k) = v;
  });

  DTensor pt = cell("hM", "vhT");  // [l][i][b][(k)][(c)]
  pt.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], b = k[2], kk = k[3], cc = k[4];
    Expr v = differentiate(A(l, i, b), c.p(kk, cc)) - C_t(i, cc, l, kk, b);
    if (single)
      for (int r = 0; r < n; ++r)
        for (int e = 0; e < m; ++e) v += C(i, e, l, r) * P_aj(r, e, b, kk, cc);
    pt.at(k) = v;
  });

  DTensor jk = cell("hM", "hMhM");  // [l][i][j][k]
  jk.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], j = k[2], kk = k[3];
    if (!single) {
      jk.at(k) = d.spatial_curvature(l, i, j, kk);
      return;
    }
    Expr v = adapted_delta_spatial(H(l, i, j), kk, N, c) - adapted_delta_spatial(H(l, i, kk), j, N, c);
    for (int r = 0; r < n; ++r) v += H(r, i, j) * H(l, r, kk) - H(r, i, kk) * H(l, r, j);
    for (int r = 0; r < n; ++r)
      for (int e = 0; e < m; ++e) v += C(i, e, l, r) * R_ij(r, e, j, kk);
    jk.at(k) = v;
  });

  DTensor pm = cell("hM", "vhM");  // [l][i][j][(k)][(c)]
  pm.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], j = k[2], kk = k[3], cc = k[4];
    Expr v = differentiate(H(l, i, j), c.p(kk, cc)) - C_s(i, cc, l, kk, j);
    if (single)
      for (int r = 0; r < n; ++r)
        for (int e = 0; e < m; ++e) v += C(i, e, l, r) * P_ij(r, e, j, kk, cc);
    pm.at(k) = v;
  });

  DTensor vv = cell("hM", "vv");  // [l][i][(j)][(b)][(k)][(c)]
  vv.for_each_index([&](std::span<const int> k) {
    const int l = k[0], i = k[1], j = k[2], b = k[3], kk = k[4], cc = k[5];
    Expr v = differentiate(C(i, b, l, j), c.p(kk, cc)) - differentiate(C(i, cc, l, kk), c.p(j, b));
    for (int r = 0; r < n; ++r) v += C(i, b, r, j) * C(r, cc, l, kk) - C(i, cc, r, kk) * C(r, b, l, j);
    vv.at(k) = v;
  });

  const bool multi = !single;
  std::vector<DTensor> hM;
  auto put_hM = [&](const char* row, std::string symbol, DTensor v, bool zero) {
    hM.push_back(v);
    table.add(TableCell{"hM", row, zero ? "0" : std::move(symbol), std::move(v), zero});
  };
  put_hM("hThT", "R^l_ibc", std::move(bc), m == 1);
  put_hM("hMhT", "R^l_ibk", std::move(bk), false);
  put_hM("vhT", "P^l(k)_ib(c)", std::move(pt), multi);
  put_hM("hMhM", multi ? "frak_R^l_ijk" : "R^l_ijk", std::move(jk), false);
  put_hM("vhM", "P^l(k)_ij(c)", std::move(pm), multi);
  put_hM("vv", "S^l(j)(k)_i(b)(c)", std::move(vv), multi);

  // v column
  for (std::size_t r = 0; r < kTableRows.size(); ++r) {
    const TableCell& t_cell = table.cells()[r];
    const TableCell& m_cell = table.cells()[kTableRows.size() + r];
    const bool zero = t_cell.zero && m_cell.zero;
    const std::string sym = "-R^(d)(i)_(l)(a)" + std::string(kTableRows[r]);
    table.add(TableCell{"v", kTableRows[r], zero ? "0" : sym,
                        detail::vertical_curvature_cell(hT[r], hM[r], detail::curvature_row_slots(kTableRows[r]), c),
                        zero});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Full pipeline

/// All geometric objects of a space, computed with the formulas of its branch.
struct Geometry {
  HamiltonSpace space;
  ConnectionData data;
  ComponentTable torsion;
  ComponentTable curvature;
};

/// Optional hook that perturbs the connection coefficients before the tables
/// are built; used for fault injection.
using CoefficientHook = std::function<void(CartanCoefficients&)>;

inline Geometry build_geometry(const HamiltonSpace& space, const CoefficientHook& hook = {}) {
  NonlinearConnection N = canonical_nlc(space);
  CartanCoefficients co = cartan_coefficients(space, N);
  if (hook) hook(co);
  ConnectionData d = connection_data(space, std::move(N), std::move(co));
  ComponentTable torsion = torsion_table(space, d);
  ComponentTable curvature = curvature_table(space, d, torsion);
  return Geometry{space, std::move(d), std::move(torsion), std::move(curvature)};
}

}  // namespace dualjet
