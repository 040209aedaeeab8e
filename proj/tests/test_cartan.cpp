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
#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace dualjet {
namespace {

using testing::bundled_configs;
using testing::config_path;
using testing::sample_points;

TEST(AdaptedDerivatives, SubtractTheConnectionAlongMomenta) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const ChartSpec& c = cfg.space.chart();
  const NonlinearConnection N = canonical_nlc(cfg.space);
  const Expr f = parse_scalar("x1*p1_1 + t2*p2_2^2", c);
  const Expr dx = adapted_delta_spatial(f, 1, N, c);
  const Expr dt = adapted_delta_temporal(f, 1, N, c);
  for (const Point& pt : sample_points(cfg.boxes, 10)) {
    const NumericTensor n1 = evaluate(N.temporal, pt, c);
    const NumericTensor n2 = evaluate(N.spatial, pt, c);
    // df/dp_1^1 = x1, df/dp_2^2 = 2 t2 p_2^2
    const double dp11 = pt.x[0], dp22 = 2.0 * pt.t[1] * pt.p[1][1];
    EXPECT_NEAR(evaluate(dx, pt, c), 0.0 - n2(0, 1, 0) * dp11 - n2(1, 1, 1) * dp22, 1e-13);
    EXPECT_NEAR(evaluate(dt, pt, c), pt.p[1][1] * pt.p[1][1] - n1(0, 1, 0) * dp11 - n1(1, 1, 1) * dp22, 1e-13);
  }
}

TEST(CartanCoefficients, ConformalTimeDependentMetricGivesHalfIdentity) {
  // g = exp(t1 + t2) delta: A^i_jc = (1/2) delta^i_j for both c
  const SpaceConfig cfg = load_config(config_path("polar_time"));
  const ChartSpec& c = cfg.space.chart();
  const NonlinearConnection N = canonical_nlc(cfg.space);
  for (const CartanCoefficients& co : {cartan_coefficients_full(cfg.space, N), cartan_coefficients_reduced(cfg.space)})
    for (const Point& pt : sample_points(cfg.boxes, 20)) {
      const NumericTensor A = evaluate(co.spatial_temporal, pt, c);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int a = 0; a < 2; ++a) EXPECT_NEAR(A(i, j, a), i == j ? 0.5 : 0.0, 1e-14);
    }
}

TEST(CartanCoefficients, FullFormulasReduceForElectrodynamicBodies) {
  for (const char* name : {"sphere", "gravitational", "three_time", "electrodynamic_m1"}) {
    const SpaceConfig cfg = load_config(config_path(name));
    const ChartSpec& c = cfg.space.chart();
    const NonlinearConnection N = canonical_nlc(cfg.space);
    const CartanCoefficients full = cartan_coefficients_full(cfg.space, N);
    const CartanCoefficients reduced = cartan_coefficients_reduced(cfg.space);
    const DTensor gamma = spatial_christoffel(cfg.space.spatial_metric(), c);
    const TensorEvaluator eval({&full.spatial_temporal, &reduced.spatial_temporal, &full.spatial_horizontal, &gamma,
                                &full.spatial_vertical},
                               c);
    for (const Point& pt : sample_points(cfg.boxes, 20)) {
      const auto v = eval.evaluate(pt);
      EXPECT_LT(max_abs_diff(v[0], v[1]), 1e-12) << name;
      EXPECT_LT(max_abs_diff(v[2], v[3]), 1e-12) << name;
      EXPECT_LT(max_abs(v[4]), 1e-12) << name;
    }
  }
}

TEST(CartanCoefficients, VerticalPartForQuarticHamiltonian) {
  // g^11 = 1 + 0.6 p^2, g^22 = x1: C_1(1)^1(1) = -(1/2) g_11 dg^11/dp_1 = -0.6 p / (1 + 0.6 p^2)
  const SpaceConfig cfg = load_config(config_path("nonquadratic_m1"));
  const ChartSpec& c = cfg.space.chart();
  const CartanCoefficients co = cartan_coefficients(cfg.space, canonical_nlc(cfg.space));
  for (const Point& pt : sample_points(cfg.boxes, 20)) {
    const NumericTensor C = evaluate(co.spatial_vertical, pt, c);
    const double p = pt.p[0][0];
    EXPECT_NEAR(C(0, 0, 0, 0), -0.6 * p / (1.0 + 0.6 * p * p), 1e-14);
    EXPECT_NEAR(C(1, 0, 1, 1), 0.0, 1e-15);
    EXPECT_NEAR(C(0, 0, 1, 1), 0.0, 1e-15);
  }
}

TEST(CovariantDerivative, MetricConditionsHoldOnBundledSpaces) {
  for (const std::string& name : bundled_configs()) {
    const SpaceConfig cfg = load_config(config_path(name));
    const NonlinearConnection N = canonical_nlc(cfg.space);
    const CartanCoefficients co = cartan_coefficients(cfg.space, N);
    const ResidualReport r = metric_condition_suite(cfg.space, N, co, sample_points(cfg.boxes, 30), 1e-9);
    for (const Check& check : r.checks) EXPECT_TRUE(check.passed()) << name << ": " << check.name << " = " << check.max_residual;
  }
}

TEST(CovariantDerivative, KroneckerDeltaIsParallel) {
  const SpaceConfig cfg = load_config(config_path("nonquadratic_m1"));
  const ChartSpec& c = cfg.space.chart();
  const NonlinearConnection N = canonical_nlc(cfg.space);
  const CartanCoefficients co = cartan_coefficients(cfg.space, N);
  DTensor delta(c, IndexSig{up_s("i"), lo_s("j")});
  for (int i = 0; i < c.n(); ++i) delta(i, i) = Expr(1.0);
  for (CovariantKind kind : {CovariantKind::TemporalH, CovariantKind::SpatialH, CovariantKind::Vertical}) {
    const DTensor d = covariant_derivative(delta, kind, co, N, c);
    for (const Point& pt : sample_points(cfg.boxes, 10)) EXPECT_LT(max_abs(evaluate(d, pt, c)), 1e-14) << describe(kind);
  }
}

TEST(CovariantDerivative, ScalarsTakeAdaptedAndPartialDerivatives) {
  const SpaceConfig cfg = load_config(config_path("electrodynamic_m1"));
  const ChartSpec& c = cfg.space.chart();
  const NonlinearConnection N = canonical_nlc(cfg.space);
  const CartanCoefficients co = cartan_coefficients(cfg.space, N);
  DTensor f(c, IndexSig{});
  f.entries()[0] = cfg.space.hamiltonian();
  const DTensor dt = covariant_derivative(f, CovariantKind::TemporalH, co, N, c);
  const DTensor dx = covariant_derivative(f, CovariantKind::SpatialH, co, N, c);
  const DTensor dp = covariant_derivative(f, CovariantKind::Vertical, co, N, c);
  EXPECT_EQ(dt.dims(), (std::vector<int>{1}));
  EXPECT_EQ(dx.dims(), (std::vector<int>{2}));
  EXPECT_EQ(dp.dims(), (std::vector<int>{2, 1}));
  const Expr H = cfg.space.hamiltonian();
  EXPECT_EQ(dt(0), adapted_delta_temporal(H, 0, N, c));
  EXPECT_EQ(dx(1), adapted_delta_spatial(H, 1, N, c));
  EXPECT_EQ(dp(1, 0), differentiate(H, c.p(1, 0)));
}

TEST(CovariantDerivative, VerticalDerivativeAppendsTwoSlots) {
  const SpaceConfig cfg = load_config(config_path("three_time"));
  const NonlinearConnection N = canonical_nlc(cfg.space);
  const CartanCoefficients co = cartan_coefficients(cfg.space, N);
  const DTensor g = cfg.space.spatial_metric().lower;
  const DTensor d = covariant_derivative(g, CovariantKind::Vertical, co, N, cfg.space.chart());
  ASSERT_EQ(d.rank(), g.rank() + 2);
  EXPECT_EQ(d.sig()[2].variance, Variance::Upper);
  EXPECT_EQ(d.sig()[2].kind, SlotKind::Spatial);
  EXPECT_EQ(d.sig()[3].variance, Variance::Lower);
  EXPECT_EQ(d.sig()[3].kind, SlotKind::Temporal);
}

TEST(CartanCoefficients, ExponentialInFirstTime) {
  // g = exp(t1) delta, m = 2: A^i_j1 = delta / 2, A^i_j2 = 0, H = 0, C = 0
  const SpaceConfig cfg = parse_config_text(R"J({"m": 2, "n": 2, "h": [["1", "0"], ["0", "1"]],
      "g_lower": [["exp(t1)", "0"], ["0", "exp(t1)"]]})J");
  const ChartSpec& c = cfg.space.chart();
  const CartanCoefficients co = cartan_coefficients(cfg.space, canonical_nlc(cfg.space));
  for (const Point& pt : sample_points(cfg.boxes, 10)) {
    const NumericTensor A = evaluate(co.spatial_temporal, pt, c);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        EXPECT_NEAR(A(i, j, 0), i == j ? 0.5 : 0.0, 1e-15);
        EXPECT_EQ(A(i, j, 1), 0.0);
      }
    EXPECT_EQ(max_abs(evaluate(co.spatial_horizontal, pt, c)), 0.0);
    EXPECT_EQ(max_abs(evaluate(co.spatial_vertical, pt, c)), 0.0);
  }
}

TEST(CartanCoefficients, TimeIndependentSphere) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const ChartSpec& c = cfg.space.chart();
  const CartanCoefficients co = cartan_coefficients(cfg.space, canonical_nlc(cfg.space));
  for (const Point& pt : sample_points(cfg.boxes, 10)) {
    EXPECT_EQ(max_abs(evaluate(co.spatial_temporal, pt, c)), 0.0);
    const NumericTensor H = evaluate(co.spatial_horizontal, pt, c);
    EXPECT_NEAR(H(0, 1, 1), -std::sin(pt.x[0]) * std::cos(pt.x[0]), 1e-14);
    EXPECT_NEAR(H(1, 0, 1), std::cos(pt.x[0]) / std::sin(pt.x[0]), 1e-14);
  }
}

TEST(AdaptedDerivatives, MomentumAlongFirstSphereCoordinate) {
  // d(p1_1)/dx^1 (adapted) = -N2_(1)1^(1) = Gamma^k_11 p_k^1, and Gamma^k_11 = 0 on the sphere
  const SpaceConfig cfg = load_config(config_path("sphere_u0"));
  const ChartSpec& c = cfg.space.chart();
  const NonlinearConnection N = canonical_nlc(cfg.space);
  const Expr d = adapted_delta_spatial(Expr(c.p(0, 0)), 0, N, c);
  Point pt = parse_point("x1=0.7853981633974483,p=0.3,-0.6,0.2,0.9", cfg.boxes);
  EXPECT_NEAR(evaluate(d, pt, c), -evaluate(N.spatial, pt, c)(0, 0, 0), 1e-15);
  EXPECT_NEAR(evaluate(d, pt, c), 0.0, 1e-15);
  const Expr d2 = adapted_delta_spatial(Expr(c.p(1, 0)), 1, N, c);
  // -N2_(2)2^(1) = Gamma^1_22 p_1^1 = -sin cos p_1^1 = -0.5 * 0.3
  EXPECT_NEAR(evaluate(d2, pt, c), -0.15, 1e-15);
}

}  // namespace
}  // namespace dualjet
