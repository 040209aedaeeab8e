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
 * @file hamilton_space.hpp
 * @brief Multi-time Hamilton spaces and their canonical nonlinear connection.
 *
 * A space is a temporal metric h_ab(t) together with a Hamiltonian of the
 * polymomenta p_i^a. For m = 1 the Hamiltonian may be arbitrary; for m >= 2 a
 * Kronecker h-regular Hamiltonian is necessarily of electrodynamic type
 *
 *   H = (1/mc) h_ab(t) g^ij(t,x) p_i^a p_j^b + U^(i)_(a)(t,x) p_i^a + F(t,x),
 *
 * so only that form is accepted there. The constant mc scales the quadratic
 * term and defaults to 1; it is folded into the stored spatial metric.
 */

#include <map>
#include <optional>
#include <variant>

#include "dualjet/metric.hpp"
#include "dualjet/sampling.hpp"

namespace dualjet {

struct RawHamiltonian {
  Expr hamiltonian;
};

struct Electrodynamic {
  MetricField g;       // effective spatial metric (already divided by mc)
  DTensor potential;   // U^(i)_(a), stored [a][i]
  Expr scalar;         // F
  double mc = 1.0;
};

inline IndexSig potential_sig() { return IndexSig{lo_t("a", true), up_s("i", true)}; }

/// G_(a)(b)^(i)(j) = (1/2) d^2 H / dp_i^a dp_j^b, stored [a][b][i][j].
/// Built once per unordered pair of momenta and mirrored, so the result is
/// structurally symmetric under (a,i) <-> (b,j).
inline DTensor vertical_metric_of(Expr hamiltonian, const ChartSpec& chart) {
  DTensor g(chart, IndexSig{lo_t("a", true), lo_t("b", true), up_s("i", true), up_s("j", true)});
  for (int a = 0; a < chart.m(); ++a)
    for (int i = 0; i < chart.n(); ++i)
      for (int b = 0; b < chart.m(); ++b)
        for (int j = 0; j < chart.n(); ++j) {
          if (chart.p(j, b).index < chart.p(i, a).index) continue;
          const Expr v = 0.5 * differentiate(differentiate(hamiltonian, chart.p(i, a)), chart.p(j, b));
          g(a, b, i, j) = v;
          g(b, a, j, i) = v;
        }
  return g;
}

class HamiltonSpace {
 public:
  /// Arbitrary Hamiltonian; only for m = 1.
  static HamiltonSpace raw(const ChartSpec& chart, DTensor h_lower, Expr hamiltonian) {
    if (chart.m() != 1)
      throw ConfigError("hamiltonian", "a raw Hamiltonian is only accepted for m = 1; use the electrodynamic form");
    HamiltonSpace s(chart, std::move(h_lower));
    s.body_ = RawHamiltonian{hamiltonian};
    s.hamiltonian_ = hamiltonian;
    const DTensor vertical = vertical_metric_of(hamiltonian, chart);
    DTensor upper = spatial_matrix(chart, Variance::Upper);
    for (int i = 0; i < chart.n(); ++i)
      for (int j = 0; j < chart.n(); ++j) upper(i, j) = vertical(0, 0, i, j) / s.h_.lower(0, 0);
    s.g_ = MetricField::from_upper(std::move(upper));
    return s;
  }

  /// Electrodynamic Hamiltonian; `g` is the user metric before scaling by 1/mc.
  static HamiltonSpace electrodynamic(const ChartSpec& chart, DTensor h_lower, MetricField g, DTensor potential,
                                      Expr scalar, double mc = 1.0) {
    if (!(mc > 0.0)) throw ConfigError("mc", "must be positive");
    for (Expr e : g.upper.entries())
      if (depends_on(e, chart, VarKind::Momentum)) throw ConfigError("g", "must not depend on the momenta");
    for (Expr e : g.lower.entries())
      if (depends_on(e, chart, VarKind::Momentum)) throw ConfigError("g", "must not depend on the momenta");
    for (Expr e : potential.entries())
      if (depends_on(e, chart, VarKind::Momentum)) throw ConfigError("U", "must not depend on the momenta");
    if (depends_on(scalar, chart, VarKind::Momentum)) throw ConfigError("F", "must not depend on the momenta");
    if (potential.dims() != std::vector<int>{chart.m(), chart.n()}) throw ConfigError("U", "must be m x n");

    HamiltonSpace s(chart, std::move(h_lower));
    if (mc != 1.0) {
      for (Expr& e : g.upper.entries()) e = e / mc;
      for (Expr& e : g.lower.entries()) e = mc * e;
    }
    s.g_ = g;
    s.body_ = Electrodynamic{std::move(g), std::move(potential), scalar, mc};
    s.hamiltonian_ = s.assemble();
    return s;
  }

  const ChartSpec& chart() const noexcept { return chart_; }
  const MetricField& temporal_metric() const noexcept { return h_; }
  /// g_ij / g^ij: derived from the vertical metric for raw bodies.
  const MetricField& spatial_metric() const noexcept { return g_; }
  Expr hamiltonian() const noexcept { return hamiltonian_; }

  bool is_raw() const noexcept { return std::holds_alternative<RawHamiltonian>(body_); }
  const Electrodynamic* electrodynamic_body() const noexcept { return std::get_if<Electrodynamic>(&body_); }

  /// Metric determinants to check for degeneracy, with a human-readable name.
  std::vector<std::pair<Expr, std::string>> determinants() const {
    return {{h_.determinant, "temporal metric h"}, {g_.determinant, "spatial metric g"}};
  }

  /// Throws DegenerateMetricError if a metric degenerates at `pt`.
  void check_point(const Point& pt) const {
    for (const auto& [det, what] : determinants()) check_nondegenerate(evaluate(det, pt, chart_), what);
  }

 private:
  HamiltonSpace(const ChartSpec& chart, DTensor h_lower) : chart_(chart) {
    if (h_lower.dims() != std::vector<int>{chart.m(), chart.m()}) throw ConfigError("h", "must be m x m");
    for (Expr e : h_lower.entries())
      if (depends_on(e, chart, VarKind::Spatial) || depends_on(e, chart, VarKind::Momentum))
        throw ConfigError("h", "must depend on the temporal coordinates only");
    if (!is_symmetric(h_lower)) throw ConfigError("h", "must be symmetric");
    h_ = MetricField::from_lower(std::move(h_lower));
  }

  Expr assemble() const {
    const auto& body = std::get<Electrodynamic>(body_);
    const ChartSpec& c = chart_;
    Expr quadratic;
    for (int a = 0; a < c.m(); ++a)
      for (int b = 0; b < c.m(); ++b)
        for (int i = 0; i < c.n(); ++i)
          for (int j = 0; j < c.n(); ++j)
            quadratic += h_.lower(a, b) * body.g.upper(i, j) * Expr(c.p(i, a)) * Expr(c.p(j, b));
    Expr linear;
    for (int a = 0; a < c.m(); ++a)
      for (int i = 0; i < c.n(); ++i) linear += body.potential(a, i) * Expr(c.p(i, a));
    return quadratic + linear + body.scalar;
  }

  ChartSpec chart_;
  MetricField h_;
  MetricField g_;
  std::variant<RawHamiltonian, Electrodynamic> body_;
  Expr hamiltonian_;
};

inline DTensor vertical_metric(const HamiltonSpace& space) {
  return vertical_metric_of(space.hamiltonian(), space.chart());
}

// ---------------------------------------------------------------------------
// Kronecker h-regularity

struct RegularityReport {
  bool pass = false;
  bool indeterminate = false;
  double max_residual = 0.0;
  int points_used = 0;
  /// Witness g^ij = G_(1)(1)^(ij) / h_11 at each used point, row-major n x n.
  std::vector<std::vector<double>> witnesses;
};

/// Samples G at random points and tests G_(a)(b)^(i)(j) = h_ab g^ij with the
/// witness g^ij read off the (1,1) block.
inline RegularityReport check_kronecker_regularity(const ChartSpec& chart, const MetricField& h, Expr hamiltonian,
                                                   const SampleBoxes& boxes, int samples, std::uint64_t seed,
                                                   double tol) {
  if (samples < 1) throw ConfigError("samples", "must be at least 1");
  const DTensor g = vertical_metric_of(hamiltonian, chart);
  const TensorEvaluator eval({&g, &h.lower}, chart);
  Sampler sampler(seed);
  RegularityReport report;
  const int m = chart.m(), n = chart.n();
  for (int s = 0; s < samples; ++s) {
    const auto values = eval.evaluate(sampler.point(boxes));
    const NumericTensor& gv = values[0];
    const NumericTensor& hv = values[1];
    if (std::abs(hv(0, 0)) < kDegeneracyThreshold) continue;
    std::vector<double> witness(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) witness[i * n + j] = gv(0, 0, i, j) / hv(0, 0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            report.max_residual =
                std::max(report.max_residual, std::abs(gv(a, b, i, j) - hv(a, b) * witness[i * n + j]));
    report.witnesses.push_back(std::move(witness));
    ++report.points_used;
  }
  report.indeterminate = report.points_used == 0;
  report.pass = !report.indeterminate && report.max_residual <= tol;
  return report;
}

inline RegularityReport check_kronecker_regularity(const HamiltonSpace& space, const SampleBoxes& boxes, int samples,
                                                   std::uint64_t seed, double tol) {
  return check_kronecker_regularity(space.chart(), space.temporal_metric(), space.hamiltonian(), boxes, samples, seed,
                                    tol);
}

/// A Hamiltonian whose vertical metric does not factor as h_ab g^ij.
struct RegularityExample {
  ChartSpec chart;
  MetricField h;
  Expr hamiltonian;
  SampleBoxes boxes;
};

/// m = 2, n = 1, h = identity, H = t1 (p1_1)^2 + (p1_2)^2: the (1)(1) block
/// gives g = t1 while the (2)(2) block gives g = 1.
inline RegularityExample nonfactorizable_example() {
  const ChartSpec c(2, 1);
  DTensor h = temporal_matrix(c, Variance::Lower);
  h(0, 0) = Expr(1.0);
  h(1, 1) = Expr(1.0);
  const Expr p1 = Expr(c.p(0, 0)), p2 = Expr(c.p(0, 1));
  return {c, MetricField::from_lower(std::move(h)), Expr(c.t(0)) * p1 * p1 + p2 * p2, SampleBoxes(c)};
}

// ---------------------------------------------------------------------------
// Electrodynamic decomposition

struct Decomposition {
  DTensor g_upper;    // g^ij = G_(1)(1)^(ij) / h_11 at p = 0
  DTensor potential;  // U^(i)_(a) = dH/dp_i^a at p = 0, stored [a][i]
  Expr scalar;        // F = H at p = 0
  double max_third_derivative = 0.0;
  double reassembly_residual = 0.0;
};

inline std::map<Var, Expr> momenta_to_zero(const ChartSpec& chart) {
  std::map<Var, Expr> zero;
  for (int a = 0; a < chart.m(); ++a)
    for (int i = 0; i < chart.n(); ++i) zero.emplace(chart.p(i, a), Expr(0.0));
  return zero;
}

/// Splits a Hamiltonian that is quadratic in the momenta into (g^ij, U, F).
/// Quadraticity is tested by sampling every third momentum derivative;
/// anything above 1e-10 raises NonQuadraticError.
inline Decomposition decompose_electrodynamic(const ChartSpec& chart, const MetricField& h, Expr hamiltonian,
                                              const SampleBoxes& boxes, int samples = 100, std::uint64_t seed = 1) {
  std::vector<Var> momenta;
  for (int a = 0; a < chart.m(); ++a)
    for (int i = 0; i < chart.n(); ++i) momenta.push_back(chart.p(i, a));

  std::vector<Expr> third;
  for (std::size_t u = 0; u < momenta.size(); ++u)
    for (std::size_t v = u; v < momenta.size(); ++v)
      for (std::size_t w = v; w < momenta.size(); ++w)
        third.push_back(
            differentiate(differentiate(differentiate(hamiltonian, momenta[u]), momenta[v]), momenta[w]));

  Decomposition out;
  Sampler sampler(seed);
  const Tape third_tape(third, chart);
  for (int s = 0; s < samples; ++s)
    for (double v : third_tape.evaluate(sampler.flat_point(boxes)))
      out.max_third_derivative = std::max(out.max_third_derivative, std::abs(v));
  if (out.max_third_derivative > 1e-10)
    throw NonQuadraticError("Hamiltonian is not quadratic in the momenta (third derivative " +
                            format_number(out.max_third_derivative) + ")");

  const auto zero = momenta_to_zero(chart);
  out.scalar = substitute(hamiltonian, zero);
  out.potential = DTensor(chart, potential_sig());
  for (int a = 0; a < chart.m(); ++a)
    for (int i = 0; i < chart.n(); ++i)
      out.potential(a, i) = substitute(differentiate(hamiltonian, chart.p(i, a)), zero);
  const DTensor vertical = vertical_metric_of(hamiltonian, chart);
  out.g_upper = spatial_matrix(chart, Variance::Upper);
  for (int i = 0; i < chart.n(); ++i)
    for (int j = 0; j < chart.n(); ++j) out.g_upper(i, j) = substitute(vertical(0, 0, i, j), zero) / h.lower(0, 0);

  Expr reassembled = out.scalar;
  for (int a = 0; a < chart.m(); ++a)
    for (int i = 0; i < chart.n(); ++i) {
      reassembled += out.potential(a, i) * Expr(chart.p(i, a));
      for (int b = 0; b < chart.m(); ++b)
        for (int j = 0; j < chart.n(); ++j)
          reassembled += h.lower(a, b) * out.g_upper(i, j) * Expr(chart.p(i, a)) * Expr(chart.p(j, b));
    }
  const Expr pair[] = {hamiltonian, reassembled};
  const Tape check(pair, chart);
  Sampler again(seed + 1);
  for (int s = 0; s < samples; ++s) {
    const auto v = check.evaluate(again.flat_point(boxes));
    out.reassembly_residual = std::max(out.reassembly_residual, std::abs(v[0] - v[1]));
  }
  return out;
}

inline Decomposition decompose_electrodynamic(const HamiltonSpace& space, const SampleBoxes& boxes,
                                              int samples = 100, std::uint64_t seed = 1) {
  return decompose_electrodynamic(space.chart(), space.temporal_metric(), space.hamiltonian(), boxes, samples, seed);
}

/// Electrodynamic space with the same chart and h built from a decomposition.
inline HamiltonSpace electrodynamic_from(const HamiltonSpace& space, const Decomposition& d) {
  return HamiltonSpace::electrodynamic(space.chart(), space.temporal_metric().lower, MetricField::from_upper(d.g_upper),
                                       d.potential, d.scalar);
}

// ---------------------------------------------------------------------------
// Canonical nonlinear connection

struct NonlinearConnection {
  DTensor temporal;  // N1_(i)b^(a), stored [i][b][a]
  DTensor spatial;   // N2_(i)j^(a), stored [i][j][a]
};

inline IndexSig temporal_nlc_sig() { return IndexSig{lo_s("i", true), lo_t("b"), up_t("a", true)}; }
inline IndexSig spatial_nlc_sig() { return IndexSig{lo_s("i", true), lo_s("j"), up_t("a", true)}; }

/// N1_(i)b^(a) = chi^a_bc p_i^c.
inline DTensor temporal_nlc(const DTensor& chi, const ChartSpec& chart) {
  DTensor n1(chart, temporal_nlc_sig());
  for (int i = 0; i < chart.n(); ++i)
    for (int b = 0; b < chart.m(); ++b)
      for (int a = 0; a < chart.m(); ++a) {
        Expr sum;
        for (int c = 0; c < chart.m(); ++c) sum += chi(a, b, c) * Expr(chart.p(i, c));
        n1(i, b, a) = sum;
      }
  return n1;
}

/// Bracket formula for m = 1:
///   N2_(i)j = (h^11/4) [ dg_ij/dx^k dH/dp_k - dg_ij/dp_k dH/dx^k
///                        + g_ik d2H/dx^j dp_k + g_jk d2H/dx^i dp_k ].
inline NonlinearConnection canonical_nlc_general(const HamiltonSpace& space) {
  const ChartSpec& c = space.chart();
  if (c.m() != 1) throw ConfigError("m", "the general nonlinear connection formula is restricted to m = 1");
  const MetricField& g = space.spatial_metric();
  const Expr H = space.hamiltonian();
  const Expr quarter_h = space.temporal_metric().upper(0, 0) / 4.0;
  const int n = c.n();

  std::vector<Expr> dH_dp(n), dH_dx(n);
  for (int k = 0; k < n; ++k) {
    dH_dp[k] = differentiate(H, c.p(k, 0));
    dH_dx[k] = differentiate(H, c.x(k));
  }
  NonlinearConnection N{temporal_nlc(temporal_christoffel(space.temporal_metric(), c), c),
                        DTensor(c, spatial_nlc_sig())};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr bracket;
      for (int k = 0; k < n; ++k) {
        bracket += differentiate(g.lower(i, j), c.x(k)) * dH_dp[k];
        bracket -= differentiate(g.lower(i, j), c.p(k, 0)) * dH_dx[k];
        bracket += g.lower(i, k) * differentiate(dH_dp[k], c.x(j));
        bracket += g.lower(j, k) * differentiate(dH_dp[k], c.x(i));
      }
      N.spatial(i, j, 0) = quarter_h * bracket;
    }
  return N;
}

/// T_(i)j^(a) = (h^ab/4)(U_ib.j + U_jb.i) with U_ib = g_ik U^(k)_(b) and
/// U_kb.r = dU_kb/dx^r - U_sb Gamma^s_kr. Stored [i][j][a].
inline DTensor electrodynamic_correction(const HamiltonSpace& space, const DTensor& gamma) {
  const ChartSpec& c = space.chart();
  const Electrodynamic* body = space.electrodynamic_body();
  if (!body) throw ConfigError("body", "electrodynamic body required");
  const int m = c.m(), n = c.n();
  const MetricField& g = space.spatial_metric();
  const MetricField& h = space.temporal_metric();

  DTensor lowered(c, IndexSig{lo_s("i"), lo_t("b")});
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b) {
      Expr sum;
      for (int k = 0; k < n; ++k) sum += g.lower(i, k) * body->potential(b, k);
      lowered(i, b) = sum;
    }
  DTensor bullet(c, IndexSig{lo_s("k"), lo_t("b"), lo_s("r")});
  for (int k = 0; k < n; ++k)
    for (int b = 0; b < m; ++b)
      for (int r = 0; r < n; ++r) {
        Expr v = differentiate(lowered(k, b), c.x(r));
        for (int s = 0; s < n; ++s) v -= lowered(s, b) * gamma(s, k, r);
        bullet(k, b, r) = v;
      }
  DTensor T(c, spatial_nlc_sig());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < m; ++a) {
        Expr sum;
        for (int b = 0; b < m; ++b) sum += (h.upper(a, b) / 4.0) * (bullet(i, b, j) + bullet(j, b, i));
        T(i, j, a) = sum;
      }
  return T;
}

/// N1 = chi p, N2_(i)j^(a) = -Gamma^k_ij p_k^a + T_(i)j^(a).
inline NonlinearConnection canonical_nlc_electrodynamic(const HamiltonSpace& space) {
  const ChartSpec& c = space.chart();
  const DTensor gamma = spatial_christoffel(space.spatial_metric(), c);
  const DTensor T = electrodynamic_correction(space, gamma);
  NonlinearConnection N{temporal_nlc(temporal_christoffel(space.temporal_metric(), c), c), DTensor(c, spatial_nlc_sig())};
  for (int i = 0; i < c.n(); ++i)
    for (int j = 0; j < c.n(); ++j)
      for (int a = 0; a < c.m(); ++a) {
        Expr v = T(i, j, a);
        for (int k = 0; k < c.n(); ++k) v -= gamma(k, i, j) * Expr(c.p(k, a));
        N.spatial(i, j, a) = v;
      }
  return N;
}

/// The connection used by the pipeline: the electrodynamic specialization for
/// electrodynamic bodies, the bracket formula for raw (m = 1) bodies.
inline NonlinearConnection canonical_nlc(const HamiltonSpace& space) {
  return space.is_raw() ? canonical_nlc_general(space) : canonical_nlc_electrodynamic(space);
}

}  // namespace dualjet
