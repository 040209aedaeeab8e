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
 * @file verifier.hpp
 * @brief Numerical oracles and property suites over sampled points.
 *
 * Every check reduces to a maximum residual over a list of points and is
 * reproducible given the points (which come from a seeded Sampler).
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualjet/torsion_curvature.hpp"

namespace dualjet {

struct Check {
  std::string name;
  double max_residual = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  std::string note;

  /// NaN residuals fail.
  bool passed() const noexcept { return max_residual <= tolerance; }
};

struct ResidualReport {
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
  void add(Check c) { checks.push_back(std::move(c)); }
  void append(const ResidualReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
  const Check* find(std::string_view name) const {
    for (const Check& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct Tolerances {
  double identity = 1e-9;  // identities exact up to rounding
  double zero = 1e-12;     // cells and residuals that vanish structurally
  double fd = 1e-6;        // finite-difference relative error
  double fd_step = 1e-6;
};

namespace detail {

inline double nan_aware_max(double a, double b) { return std::isnan(b) || std::isnan(a) ? NAN : std::max(a, b); }

/// Max |a - b| over entries of equally shaped tensors, evaluated at `pts`.
inline double max_tensor_gap(const DTensor& a, const DTensor& b, const std::vector<Point>& pts, const ChartSpec& c) {
  const TensorEvaluator eval({&a, &b}, c);
  double worst = 0.0;
  for (const Point& pt : pts) {
    const auto v = eval.evaluate(pt);
    worst = nan_aware_max(worst, max_abs_diff(v[0], v[1]));
  }
  return worst;
}

/// Max |entry| over `pts`.
inline double max_tensor_abs(const DTensor& a, const std::vector<Point>& pts, const ChartSpec& c) {
  const TensorEvaluator eval({&a}, c);
  double worst = 0.0;
  for (const Point& pt : pts) worst = nan_aware_max(worst, max_abs(eval.evaluate(pt)[0]));
  return worst;
}

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite differences

/// Central-difference oracle for a list of (expression, variable) pairs.
/// Relative error: |symbolic - fd| / max(1, |symbolic|, |f|).
inline Check fd_check(std::span<const std::pair<Expr, Var>> pairs, const std::vector<Point>& pts,
                      const ChartSpec& chart, double eps, double tol, std::string name = "finite differences") {
  if (!(eps >= 1e-8 && eps <= 1e-4)) throw ConfigError("fd_step", "must lie in [1e-8, 1e-4]");
  Check check{std::move(name), 0.0, static_cast<int>(pts.size()), tol, {}};
  std::map<int, std::vector<Expr>> by_var;
  for (const auto& [e, v] : pairs) by_var[v.index].push_back(e);

  for (const auto& [var, exprs] : by_var) {
    std::vector<Expr> derivs;
    for (Expr e : exprs) derivs.push_back(differentiate(e, Var{var}));
    const Tape base(exprs, chart);
    const Tape deriv(derivs, chart);
    for (const Point& pt : pts) {
      std::vector<double> flat = pt.flatten(chart);
      const std::vector<double> f0 = base.evaluate(flat);
      const std::vector<double> d = deriv.evaluate(flat);
      const double x0 = flat[var];
      flat[var] = x0 + eps;
      const std::vector<double> fp = base.evaluate(flat);
      flat[var] = x0 - eps;
      const std::vector<double> fm = base.evaluate(flat);
      for (std::size_t k = 0; k < exprs.size(); ++k) {
        const double fd = (fp[k] - fm[k]) / (2.0 * eps);
        const double err = std::abs(d[k] - fd) / std::max({1.0, std::abs(d[k]), std::abs(f0[k])});
        if (std::isnan(err) || err > check.max_residual) {
          check.max_residual = err;
          check.note = "worst at d/d" + chart.name(Var{var});
        }
      }
    }
  }
  check.note = std::to_string(pairs.size()) + " derivatives; " + check.note;
  return check;
}

/// Checks de/dv for every chart variable v.
inline Check fd_check(Expr e, const std::vector<Point>& pts, const ChartSpec& chart, double eps = 1e-6,
                      double tol = 1e-6) {
  std::vector<std::pair<Expr, Var>> pairs;
  for (int k = 0; k < chart.num_vars(); ++k) pairs.emplace_back(e, Var{k});
  return fd_check(pairs, pts, chart, eps, tol, "fd");
}

// ---------------------------------------------------------------------------
// Metrical conditions

inline ResidualReport metric_condition_suite(const HamiltonSpace& space, const NonlinearConnection& N,
                                             const CartanCoefficients& co, const std::vector<Point>& pts,
                                             double tol) {
  const ChartSpec& c = space.chart();
  const MetricField& g = space.spatial_metric();
  const MetricField& h = space.temporal_metric();
  const int samples = static_cast<int>(pts.size());
  ResidualReport r;
  auto vanish = [&](std::string name, const DTensor& t) {
    r.add(Check{std::move(name), detail::max_tensor_abs(t, pts, c), samples, tol, {}});
  };
  vanish("g_{ij|k}", covariant_derivative(g.lower, CovariantKind::SpatialH, co, N, c));
  vanish("g_{ij/c}", covariant_derivative(g.lower, CovariantKind::TemporalH, co, N, c));
  vanish("g^{ij}|^(k)_(c)", covariant_derivative(g.upper, CovariantKind::Vertical, co, N, c));
  vanish("h_{ab/c}", covariant_derivative(h.lower, CovariantKind::TemporalH, co, N, c));
  vanish("h_{ab|k}", covariant_derivative(h.lower, CovariantKind::SpatialH, co, N, c));
  vanish("h_{ab}|^(k)_(c)", covariant_derivative(h.lower, CovariantKind::Vertical, co, N, c));

  const DTensor& H = co.spatial_horizontal;
  DTensor h_asym(c, H.sig());
  h_asym.for_each_index([&](std::span<const int> k) { h_asym.at(k) = H(k[0], k[1], k[2]) - H(k[0], k[2], k[1]); });
  vanish("H^i_jk - H^i_kj", h_asym);
  const DTensor& C = co.spatial_vertical;
  DTensor c_asym(c, C.sig());
  c_asym.for_each_index(
      [&](std::span<const int> k) { c_asym.at(k) = C(k[0], k[1], k[2], k[3]) - C(k[0], k[1], k[3], k[2]); });
  vanish("C_i(c)^j(k) - C_i(c)^k(j)", c_asym);
  return r;
}

// ---------------------------------------------------------------------------
// Affine chart changes

/// t~ = L t + t0, x~ = B x + x0, p~ = L p B^-1 (p stored [a][i]).
struct AffineChartMap {
  std::string name;
  std::vector<std::vector<double>> temporal;  // L
  std::vector<double> temporal_offset;
  std::vector<std::vector<double>> spatial;  // B
  std::vector<double> spatial_offset;
};

namespace detail {

using Matrix = std::vector<std::vector<double>>;

inline Matrix identity_matrix(int n) {
  Matrix a(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

/// Gauss-Jordan inverse with partial pivoting; also returns the determinant.
inline Matrix invert(Matrix a, double& det) {
  const int n = static_cast<int>(a.size());
  Matrix inv = identity_matrix(n);
  det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) {
      det = 0.0;
      return inv;
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    const double d = a[col][col];
    det *= d;
    for (int k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

struct ResolvedMap {
  Matrix L, Linv, B, Binv;
  std::vector<double> t0, x0;
};

inline ResolvedMap resolve(const AffineChartMap& map, const ChartSpec& c) {
  const int m = c.m(), n = c.n();
  auto square = [](const Matrix& a, int d) {
    if (static_cast<int>(a.size()) != d) return false;
    for (const auto& row : a)
      if (static_cast<int>(row.size()) != d) return false;
    return true;
  };
  if (!square(map.temporal, m) || static_cast<int>(map.temporal_offset.size()) != m ||
      !square(map.spatial, n) || static_cast<int>(map.spatial_offset.size()) != n)
    throw ConfigError("map", "chart map dimensions do not match the chart");
  ResolvedMap r{map.temporal, {}, map.spatial, {}, map.temporal_offset, map.spatial_offset};
  double dl = 0.0, db = 0.0;
  r.Linv = invert(r.L, dl);
  r.Binv = invert(r.B, db);
  if (!(std::abs(dl) > 1e-9) || !(std::abs(db) > 1e-9))
    throw ConfigError("map", "degenerate chart map '" + map.name + "'");
  return r;
}

}  // namespace detail

/// The same geometric space written in the coordinates of `map`.
inline HamiltonSpace transformed_space(const HamiltonSpace& space, const AffineChartMap& map) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  const detail::ResolvedMap r = detail::resolve(map, c);

  // old coordinates as expressions in the new ones
  std::map<Var, Expr> old_of_new;
  for (int a = 0; a < m; ++a) {
    Expr v;
    for (int b = 0; b < m; ++b) v += r.Linv[a][b] * (Expr(c.t(b)) - r.t0[b]);
    old_of_new.emplace(c.t(a), v);
  }
  for (int i = 0; i < n; ++i) {
    Expr v;
    for (int j = 0; j < n; ++j) v += r.Binv[i][j] * (Expr(c.x(j)) - r.x0[j]);
    old_of_new.emplace(c.x(i), v);
  }
  for (int b = 0; b < m; ++b)
    for (int j = 0; j < n; ++j) {
      Expr v;
      for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i) v += (r.Linv[b][a] * r.B[i][j]) * Expr(c.p(i, a));
      old_of_new.emplace(c.p(j, b), v);
    }
  auto sub = [&](Expr e) { return substitute(e, old_of_new); };

  DTensor h = temporal_matrix(c, Variance::Lower);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Expr v;
      for (int e = 0; e < m; ++e)
        for (int f = 0; f < m; ++f) v += (r.Linv[e][a] * r.Linv[f][b]) * space.temporal_metric().lower(e, f);
      h(a, b) = sub(v);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < a; ++b) h(a, b) = h(b, a);

  if (space.is_raw()) return HamiltonSpace::raw(c, h, sub(space.hamiltonian()));

  const Electrodynamic& body = *space.electrodynamic_body();
  DTensor g = spatial_matrix(c, Variance::Upper);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Expr v;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v += (r.B[k][i] * r.B[l][j]) * body.g.upper(i, j);
      g(k, l) = sub(v);
      g(l, k) = g(k, l);
    }
  DTensor U(c, potential_sig());
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      Expr v;
      for (int b = 0; b < m; ++b)
        for (int k = 0; k < n; ++k) v += (r.Linv[b][a] * r.B[i][k]) * body.potential(b, k);
      U(a, i) = sub(v);
    }
  return HamiltonSpace::electrodynamic(c, h, MetricField::from_upper(g), U, sub(body.scalar));
}

/// Image of `pt` under `map`.
inline Point map_point(const Point& pt, const AffineChartMap& map, const ChartSpec& c) {
  const detail::ResolvedMap r = detail::resolve(map, c);
  Point out = Point::zeros(c);
  for (int a = 0; a < c.m(); ++a) {
    out.t[a] = r.t0[a];
    for (int b = 0; b < c.m(); ++b) out.t[a] += r.L[a][b] * pt.t[b];
  }
  for (int i = 0; i < c.n(); ++i) {
    out.x[i] = r.x0[i];
    for (int j = 0; j < c.n(); ++j) out.x[i] += r.B[i][j] * pt.x[j];
  }
  for (int a = 0; a < c.m(); ++a)
    for (int i = 0; i < c.n(); ++i) {
      double v = 0.0;
      for (int b = 0; b < c.m(); ++b)
        for (int j = 0; j < c.n(); ++j) v += r.L[a][b] * pt.p[b][j] * r.Binv[j][i];
      out.p[a][i] = v;
    }
  return out;
}

/// Identity, t -> 2t, and a unimodular spatial shear (a translation when n = 1).
inline std::vector<AffineChartMap> builtin_chart_maps(const ChartSpec& c) {
  const int m = c.m(), n = c.n();
  std::vector<AffineChartMap> maps;
  maps.push_back({"identity", detail::identity_matrix(m), std::vector<double>(m, 0.0), detail::identity_matrix(n),
                  std::vector<double>(n, 0.0)});
  auto twice = detail::identity_matrix(m);
  for (int a = 0; a < m; ++a) twice[a][a] = 2.0;
  maps.push_back({"t-scale-2", twice, std::vector<double>(m, 0.0), detail::identity_matrix(n),
                  std::vector<double>(n, 0.0)});
  auto shear = detail::identity_matrix(n);
  std::vector<double> shift(n, 0.0);
  if (n >= 2)
    shear[0][1] = 1.0;
  else
    shift[0] = 0.25;
  maps.push_back({n >= 2 ? "x-shear" : "x-translate", detail::identity_matrix(m), std::vector<double>(m, 0.0), shear,
                  shift});
  return maps;
}

/// Transports N computed in the original chart by the nonlinear-connection
/// transformation law and compares with N computed in the mapped chart:
///   sum_c N1~_(j)c^(b) L[c][a] = sum_{k,c} N1_(k)a^(c) L[b][c] Binv[k][j]
///   sum_k N2~_(j)k^(b) B[k][i] = sum_{k,c} N2_(k)i^(c) L[b][c] Binv[k][j]
/// For affine maps the dp~/dt and dp~/dx terms vanish.
inline Check nlc_transformation_check(const HamiltonSpace& space, const AffineChartMap& map,
                                      const std::vector<Point>& pts, double tol) {
  const ChartSpec& c = space.chart();
  const int m = c.m(), n = c.n();
  const detail::ResolvedMap r = detail::resolve(map, c);
  const NonlinearConnection N = canonical_nlc(space);
  const HamiltonSpace other = transformed_space(space, map);
  const NonlinearConnection Nt = canonical_nlc(other);
  const TensorEvaluator old_eval({&N.temporal, &N.spatial}, c);
  const TensorEvaluator new_eval({&Nt.temporal, &Nt.spatial}, c);

  double worst = 0.0;
  for (const Point& pt : pts) {
    const auto o = old_eval.evaluate(pt);
    const auto w = new_eval.evaluate(map_point(pt, map, c));
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < m; ++b) {
        for (int a = 0; a < m; ++a) {
          double lhs = 0.0, rhs = 0.0;
          for (int cc = 0; cc < m; ++cc) lhs += w[0](j, cc, b) * r.L[cc][a];
          for (int k = 0; k < n; ++k)
            for (int cc = 0; cc < m; ++cc) rhs += o[0](k, a, cc) * r.L[b][cc] * r.Binv[k][j];
          worst = detail::nan_aware_max(worst, std::abs(lhs - rhs));
        }
        for (int i = 0; i < n; ++i) {
          double lhs = 0.0, rhs = 0.0;
          for (int k = 0; k < n; ++k) lhs += w[1](j, k, b) * r.B[k][i];
          for (int k = 0; k < n; ++k)
            for (int cc = 0; cc < m; ++cc) rhs += o[1](k, i, cc) * r.L[b][cc] * r.Binv[k][j];
          worst = detail::nan_aware_max(worst, std::abs(lhs - rhs));
        }
      }
  }
  return Check{"N transport (" + map.name + ")", worst, static_cast<int>(pts.size()), tol, {}};
}

// ---------------------------------------------------------------------------
// Reduced versus general formulas

/// Electrodynamic bodies: adapted-derivative coefficients against the
/// reduced ones (C = 0, H = Gamma). m = 1: the bracket formula for N2 against
/// -Gamma p + T, on the space itself or on its quadratic decomposition.
inline ResidualReport reduction_equivalence_check(const HamiltonSpace& space, const SampleBoxes& boxes,
                                                  const std::vector<Point>& pts, const Tolerances& tol) {
  const ChartSpec& c = space.chart();
  const int samples = static_cast<int>(pts.size());
  ResidualReport r;
  if (const Electrodynamic* body = space.electrodynamic_body()) {
    (void)body;
    const NonlinearConnection N = canonical_nlc(space);
    const CartanCoefficients full = cartan_coefficients_full(space, N);
    const CartanCoefficients reduced = cartan_coefficients_reduced(space);
    const DTensor gamma = spatial_christoffel(space.spatial_metric(), c);
    r.add({"A full - reduced", detail::max_tensor_gap(full.spatial_temporal, reduced.spatial_temporal, pts, c),
           samples, tol.zero, {}});
    r.add({"H full - Gamma", detail::max_tensor_gap(full.spatial_horizontal, gamma, pts, c), samples, tol.zero, {}});
    r.add({"C full", detail::max_tensor_abs(full.spatial_vertical, pts, c), samples, tol.zero, {}});
  }
  if (c.m() != 1) return r;

  std::optional<HamiltonSpace> reduced_space;
  std::string note;
  if (space.is_raw()) {
    try {
      reduced_space = electrodynamic_from(space, decompose_electrodynamic(space, boxes));
      note = "raw H against its quadratic decomposition";
    } catch (const NonQuadraticError&) {
      return r;  // no electrodynamic form to compare with
    }
  } else {
    reduced_space = space;
    note = "bracket formula on the assembled H";
  }
  const NonlinearConnection general = canonical_nlc_general(space);
  const NonlinearConnection special = canonical_nlc_electrodynamic(*reduced_space);
  const TensorEvaluator eval({&general.spatial, &special.spatial}, c);
  double worst = 0.0;
  for (const Point& pt : pts) {
    const auto v = eval.evaluate(pt);
    for (std::size_t k = 0; k < v[0].size(); ++k)
      worst = detail::nan_aware_max(worst, detail::relative_gap(v[0].entries()[k], v[1].entries()[k]));
  }
  r.add({"N2 bracket vs -Gamma p + T (relative)", worst, samples, tol.identity, note});
  return r;
}

/// Evaluates both branches of the torsion and curvature formulas on an
/// electrodynamic space and compares every cell.
inline ResidualReport branch_consistency_check(const HamiltonSpace& space, const ConnectionData& d,
                                               const std::vector<Point>& pts, double tol) {
  const ChartSpec& c = space.chart();
  ResidualReport r;
  if (!space.electrodynamic_body()) return r;
  const ComponentTable t1 = torsion_table(space, d, Branch::Single);
  const ComponentTable t2 = torsion_table(space, d, Branch::Multi);
  const ComponentTable k1 = curvature_table(space, d, t1, Branch::Single);
  const ComponentTable k2 = curvature_table(space, d, t2, Branch::Multi);
  auto compare = [&](const ComponentTable& a, const ComponentTable& b, std::string name) {
    Check check{std::move(name), 0.0, static_cast<int>(pts.size()), tol, {}};
    for (std::size_t k = 0; k < a.cells().size(); ++k) {
      const double gap = detail::max_tensor_gap(a.cells()[k].value, b.cells()[k].value, pts, c);
      if (std::isnan(gap) || gap > check.max_residual) {
        check.max_residual = gap;
        check.note = "worst cell " + a.key(a.cells()[k]);
      }
    }
    r.add(std::move(check));
  };
  compare(t1, t2, "torsion m=1 vs m>=2 formulas");
  compare(k1, k2, "curvature m=1 vs m>=2 formulas");
  return r;
}

// ---------------------------------------------------------------------------
// Table structure

/// Every cell flagged zero evaluates to zero.
inline ResidualReport table_zero_check(const Geometry& geo, const std::vector<Point>& pts, double tol) {
  ResidualReport r;
  for (const ComponentTable* table : {&geo.torsion, &geo.curvature}) {
    Check check{table->family() + " zero cells", 0.0, static_cast<int>(pts.size()), tol, {}};
    int cells = 0;
    for (const TableCell& cell : table->cells()) {
      if (!cell.zero) continue;
      ++cells;
      const double v = detail::max_tensor_abs(cell.value, pts, geo.space.chart());
      if (std::isnan(v) || v > check.max_residual) {
        check.max_residual = v;
        check.note = "worst cell " + table->key(cell);
      }
    }
    check.note = std::to_string(cells) + " cells" + (check.note.empty() ? "" : "; " + check.note);
    r.add(std::move(check));
  }
  return r;
}

namespace detail {

/// Max |t[..., i, j] + t[..., j, i]| over the final two slots (or the final
/// two slot groups of size `group`).
inline DTensor antisymmetric_sum(const DTensor& t, std::size_t group) {
  DTensor out = t;
  const std::size_t rank = t.rank();
  std::vector<int> swapped(rank);
  t.for_each_index([&](std::span<const int> k) {
    std::copy(k.begin(), k.end(), swapped.begin());
    for (std::size_t g = 0; g < group; ++g) std::swap(swapped[rank - 2 * group + g], swapped[rank - group + g]);
    out.at(k) = t.at(k) + t.at(swapped);
  });
  return out;
}

}  // namespace detail

inline ResidualReport antisymmetry_suite(const Geometry& geo, const std::vector<Point>& pts, double tol) {
  const ChartSpec& c = geo.space.chart();
  const int samples = static_cast<int>(pts.size());
  ResidualReport r;
  auto add = [&](std::string name, const DTensor& t, std::size_t group) {
    r.add({std::move(name), detail::max_tensor_abs(detail::antisymmetric_sum(t, group), pts, c), samples, tol, {}});
  };
  add("R^(f)_(r)ij antisymmetric", geo.torsion("v", "hMhM"), 1);
  add("R^(f)_(r)ab antisymmetric", geo.torsion("v", "hThT"), 1);
  add("frak_R^l_ijk antisymmetric", geo.data.spatial_curvature, 1);
  add("chi^d_abc antisymmetric", geo.data.temporal_curvature, 1);
  add("R^l_ijk antisymmetric", geo.curvature("hM", "hMhM"), 1);
  add("S^l(j)(k) antisymmetric", geo.curvature("hM", "vv"), 2);
  return r;
}

/// The v column of the curvature table against a numeric assembly from the
/// h columns, and for m = 1 the mirror equalities v = -hM.
inline ResidualReport vertical_block_check(const Geometry& geo, const std::vector<Point>& pts, double tol) {
  const ChartSpec& c = geo.space.chart();
  const std::size_t rows = kTableRows.size();
  std::vector<const DTensor*> all;
  for (const TableCell& cell : geo.curvature.cells()) all.push_back(&cell.value);
  const TensorEvaluator eval(all, c);
  double identity = 0.0, mirror = 0.0;
  for (const Point& pt : pts) {
    const auto v = eval.evaluate(pt);
    for (std::size_t row = 0; row < rows; ++row) {
      const NumericTensor& hT = v[row];
      const NumericTensor& hM = v[rows + row];
      const NumericTensor& vb = v[2 * rows + row];
      const std::size_t tail = hT.size() / (c.m() * c.m());
      for (std::size_t off = 0; off < vb.size(); ++off) {
        const std::vector<int> k = vb.index_of(off);
        const int d = k[0], i = k[1], l = k[2], a = k[3];
        std::size_t rest = 0;
        for (std::size_t s = 4; s < k.size(); ++s) rest = rest * vb.dims()[s] + k[s];
        double expect = 0.0;
        if (i == l) expect += hT.entries()[(d * c.m() + a) * tail + rest];
        if (d == a) expect -= hM.entries()[(i * c.n() + l) * tail + rest];
        identity = detail::nan_aware_max(identity, std::abs(vb.entries()[off] - expect));
        if (c.m() == 1) mirror = detail::nan_aware_max(mirror, std::abs(vb.entries()[off] + hM.entries()[(i * c.n() + l) * tail + rest]));
      }
    }
  }
  ResidualReport r;
  r.add({"curvature v-block identities", identity, static_cast<int>(pts.size()), tol, {}});
  if (c.m() == 1) r.add({"curvature v-block mirrors (m=1)", mirror, static_cast<int>(pts.size()), tol, {}});
  return r;
}

// ---------------------------------------------------------------------------
// Kronecker regularity

inline ResidualReport regularity_check(const HamiltonSpace& space, const SampleBoxes& boxes, int samples,
                                       std::uint64_t seed, double tol) {
  ResidualReport r;
  const RegularityReport reg = check_kronecker_regularity(space, boxes, samples, seed, tol);
  r.add({"Kronecker factorization", reg.indeterminate ? NAN : reg.max_residual, reg.points_used, tol,
         reg.indeterminate ? "indeterminate" : ""});
  try {
    const Decomposition d = decompose_electrodynamic(space, boxes, samples, seed);
    r.add({"decompose-reassemble H", d.reassembly_residual, samples, tol, {}});
  } catch (const NonQuadraticError&) {
    // only quadratic Hamiltonians decompose
  }
  return r;
}

// ---------------------------------------------------------------------------
// Everything

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 1;
  int fd_samples = 20;
  Tolerances tol;
};

struct VerifyResult {
  ResidualReport report;
  std::vector<Point> points;
};

/// Samples points, checks the metrics are nondegenerate there, and runs every
/// suite. Degenerate points raise DegenerateMetricError.
inline VerifyResult verify_space(const HamiltonSpace& space, const SampleBoxes& boxes, const VerifyOptions& opt,
                                 const CoefficientHook& hook = {}) {
  const ChartSpec& c = space.chart();
  if (opt.samples < 1) throw ConfigError("samples", "must be at least 1");
  VerifyResult out;
  Sampler sampler(opt.seed);
  out.points = sampler.points(boxes, opt.samples);
  for (const Point& pt : out.points) space.check_point(pt);

  std::vector<std::pair<Expr, Var>> derivatives;
  std::optional<Geometry> geo;
  {
    DerivativeRecorder rec;
    geo = build_geometry(space, hook);
    derivatives = rec.calls();
  }
  ResidualReport& r = out.report;
  const std::vector<Point>& pts = out.points;

  r.append(metric_condition_suite(space, geo->data.N, geo->data.coeffs, pts, opt.tol.identity));
  r.append(reduction_equivalence_check(space, boxes, pts, opt.tol));
  r.append(branch_consistency_check(space, geo->data, pts, opt.tol.identity));
  for (const AffineChartMap& map : builtin_chart_maps(c))
    r.add(nlc_transformation_check(space, map, pts, opt.tol.identity));
  r.append(table_zero_check(*geo, pts, opt.tol.zero));
  r.append(antisymmetry_suite(*geo, pts, opt.tol.zero));
  r.append(vertical_block_check(*geo, pts, opt.tol.zero));
  r.append(regularity_check(space, boxes, opt.samples, opt.seed, opt.tol.zero));

  const std::vector<Point> fd_pts(pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), opt.fd_samples));
  r.add(fd_check(derivatives, fd_pts, c, opt.tol.fd_step, opt.tol.fd, "finite differences (pipeline)"));
  return out;
}

}  // namespace dualjet
