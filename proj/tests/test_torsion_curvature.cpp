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
#include <numbers>
#include <set>

#include "test_support.hpp"

namespace dualjet {
namespace {

using testing::bundled_configs;
using testing::config_path;
using testing::sample_points;

Geometry geometry_of(const std::string& name) { return build_geometry(load_config(config_path(name)).space); }

TEST(Tables, EveryCellIsPresentOnce) {
  const Geometry geo = geometry_of("sphere");
  for (const ComponentTable* table : {&geo.torsion, &geo.curvature}) {
    ASSERT_EQ(table->cells().size(), kTableColumns.size() * kTableRows.size());
    std::set<std::string> keys;
    for (const TableCell& cell : table->cells()) keys.insert(table->key(cell));
    EXPECT_EQ(keys.size(), table->cells().size());
    for (const char* col : kTableColumns)
      for (const char* row : kTableRows) EXPECT_NO_THROW(table->at(col, row));
  }
  EXPECT_EQ(geo.torsion.key(geo.torsion.at("hM", "hMhT")), "torsion.hM.hMhT");
  EXPECT_THROW(geo.torsion.at("hX", "hMhT"), std::out_of_range);
}

TEST(Tables, CellShapesFollowTheirSlots) {
  const Geometry geo = geometry_of("three_time");  // m = 3, n = 3
  EXPECT_EQ(geo.torsion("v", "vv").dims(), (std::vector<int>{3, 3, 3, 3, 3, 3}));
  EXPECT_EQ(geo.torsion("hT", "hThT").dims(), (std::vector<int>{3, 3, 3}));
  EXPECT_EQ(geo.curvature("v", "hMhT").dims(), (std::vector<int>{3, 3, 3, 3, 3, 3}));
  EXPECT_EQ(geo.curvature("hM", "vhM").dims(), (std::vector<int>{3, 3, 3, 3, 3}));
}

TEST(Tables, FlatSpaceHasNoTorsionOrCurvature) {
  const SpaceConfig cfg = load_config(config_path("flat"));
  const Geometry geo = build_geometry(cfg.space);
  for (const Point& pt : sample_points(cfg.boxes, 10))
    for (const ComponentTable* table : {&geo.torsion, &geo.curvature})
      for (const TableCell& cell : table->cells())
        EXPECT_EQ(max_abs(evaluate(cell.value, pt, cfg.space.chart())), 0.0) << table->key(cell);
}

TEST(Tables, ZeroCellsVanishOnBundledSpaces) {
  for (const std::string& name : bundled_configs()) {
    const SpaceConfig cfg = load_config(config_path(name));
    const Geometry geo = build_geometry(cfg.space);
    for (const Check& c : table_zero_check(geo, sample_points(cfg.boxes, 20), 1e-12).checks)
      EXPECT_TRUE(c.passed()) << name << ": " << c.name << " " << c.note;
  }
}

TEST(Torsion, SphereVerticalHorizontalCellWithoutPotential) {
  // frak_R^1_212 = -sin^2 x1 and frak_R^2_112 = 1, so
  // R^(f)_(2)12 = sin^2(x1) p_1^f and R^(f)_(1)12 = -p_2^f
  const SpaceConfig cfg = load_config(config_path("sphere_u0"));
  const Geometry geo = build_geometry(cfg.space);
  const ChartSpec& c = cfg.space.chart();
  for (const Point& pt : sample_points(cfg.boxes, 30)) {
    const NumericTensor R = evaluate(geo.torsion("v", "hMhM"), pt, c);  // [r][f][i][j]
    const double s2 = std::sin(pt.x[0]) * std::sin(pt.x[0]);
    for (int f = 0; f < 2; ++f) {
      EXPECT_NEAR(R(1, f, 0, 1), s2 * pt.p[f][0], 1e-12);
      EXPECT_NEAR(R(0, f, 0, 1), -pt.p[f][1], 1e-12);
      EXPECT_NEAR(R(1, f, 1, 0), -s2 * pt.p[f][0], 1e-12);
    }
  }
  Point equator = Point::zeros(c);
  equator.t = {1.0, 1.0};
  equator.x = {std::numbers::pi / 2, 3.0};
  equator.p[0][0] = 1.0;
  const NumericTensor R = evaluate(geo.torsion("v", "hMhM"), equator, c);
  const NumericTensor K = evaluate(geo.data.spatial_curvature, equator, c);
  EXPECT_NEAR(K(0, 1, 0, 1), -1.0, 1e-12);
  EXPECT_NEAR(R(1, 0, 0, 1), -K(0, 1, 0, 1) * equator.p[0][0], 1e-12);
}

TEST(Torsion, HorizontalCellIsMinusTemporalCoefficient) {
  // g = exp(t1 + t2) delta: A = delta / 2, so T^r_aj = -delta^r_j / 2
  const SpaceConfig cfg = load_config(config_path("polar_time"));
  const Geometry geo = build_geometry(cfg.space);
  for (const Point& pt : sample_points(cfg.boxes, 10)) {
    const NumericTensor T = evaluate(geo.torsion("hM", "hMhT"), pt, cfg.space.chart());  // [r][a][j]
    for (int r = 0; r < 2; ++r)
      for (int a = 0; a < 2; ++a)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(T(r, a, j), r == j ? -0.5 : 0.0, 1e-14);
  }
}

TEST(Curvature, SphereHorizontalCurvatureIsRiemannian) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const Geometry geo = build_geometry(cfg.space);
  for (const Point& pt : sample_points(cfg.boxes, 20)) {
    const NumericTensor R = evaluate(geo.curvature("hM", "hMhM"), pt, cfg.space.chart());  // [l][i][j][k]
    const double s2 = std::sin(pt.x[0]) * std::sin(pt.x[0]);
    EXPECT_NEAR(R(0, 1, 0, 1), -s2, 1e-12);
    EXPECT_NEAR(R(1, 0, 0, 1), 1.0, 1e-12);
    EXPECT_NEAR(R(0, 0, 0, 1), 0.0, 1e-12);
  }
}

TEST(Curvature, VerticalColumnMirrorsSpatialColumnForSingleTime) {
  for (const char* name : {"rheonomic_m1", "nonquadratic_m1", "electrodynamic_m1"}) {
    const SpaceConfig cfg = load_config(config_path(name));
    const Geometry geo = build_geometry(cfg.space);
    for (const Check& c : vertical_block_check(geo, sample_points(cfg.boxes, 20), 1e-12).checks)
      EXPECT_TRUE(c.passed()) << name << ": " << c.name << " " << c.max_residual;
  }
}

TEST(Branches, SingleAndMultiTimeFormulasAgreeOnElectrodynamicSpaces) {
  const SpaceConfig cfg = load_config(config_path("electrodynamic_m1"));
  const Geometry geo = build_geometry(cfg.space);
  const ResidualReport r = branch_consistency_check(cfg.space, geo.data, sample_points(cfg.boxes, 30), 1e-9);
  ASSERT_EQ(r.checks.size(), 2u);
  for (const Check& c : r.checks) EXPECT_TRUE(c.passed()) << c.name << " " << c.max_residual << " " << c.note;
}

TEST(Branches, MultiTimeFormulasNeedAnElectrodynamicBody) {
  const SpaceConfig cfg = load_config(config_path("nonquadratic_m1"));
  const Geometry geo = build_geometry(cfg.space);
  EXPECT_THROW(torsion_table(cfg.space, geo.data, Branch::Multi), ConfigError);
  EXPECT_NO_THROW(torsion_table(cfg.space, geo.data, Branch::Single));
}

TEST(Branches, ZeroFlagsDependOnTheBranch) {
  const Geometry single = geometry_of("rheonomic_m1");
  const Geometry multi = geometry_of("sphere");
  EXPECT_TRUE(single.curvature.at("hM", "hThT").zero);
  EXPECT_FALSE(single.curvature.at("hM", "vv").zero);
  for (const char* row : {"vhT", "vhM", "vv"}) EXPECT_TRUE(multi.curvature.at("hM", row).zero) << row;
  EXPECT_TRUE(multi.torsion.at("hT", "hThT").zero);
  EXPECT_FALSE(multi.torsion.at("v", "hMhM").zero);
}

TEST(Antisymmetry, HoldsOnBundledSpaces) {
  for (const std::string& name : bundled_configs()) {
    const SpaceConfig cfg = load_config(config_path(name));
    const Geometry geo = build_geometry(cfg.space);
    for (const Check& c : antisymmetry_suite(geo, sample_points(cfg.boxes, 20), 1e-12).checks)
      EXPECT_TRUE(c.passed()) << name << ": " << c.name << " " << c.max_residual;
  }
}

TEST(Torsion, FlatPolarTimeWithEuclideanSpace) {
  // h = diag(1, t1^2), g = delta, U = 0: R^(f)_(r)ab = 0 and T^r_aj = 0 although N1 != 0
  const SpaceConfig cfg = parse_config_text(R"J({"m": 2, "n": 2, "h": [["1", "0"], ["0", "t1^2"]],
      "g_upper": [["1", "0"], ["0", "1"]]})J");
  const Geometry geo = build_geometry(cfg.space);
  const ChartSpec& c = cfg.space.chart();
  double n1 = 0.0;
  for (const Point& pt : sample_points(cfg.boxes, 20)) {
    EXPECT_LT(max_abs(evaluate(geo.torsion("v", "hThT"), pt, c)), 1e-12);
    EXPECT_EQ(max_abs(evaluate(geo.torsion("hM", "hMhT"), pt, c)), 0.0);
    n1 = std::max(n1, max_abs(evaluate(geo.data.N.temporal, pt, c)));
  }
  EXPECT_GT(n1, 0.1);
}

TEST(Curvature, ConstantTemporalCoefficientGivesNoMixedCurvature) {
  // g = exp(t1 + t2) delta: A = delta / 2 is constant, so R^l_ibc = 0
  const SpaceConfig cfg = load_config(config_path("polar_time"));
  const Geometry geo = build_geometry(cfg.space);
  for (const Point& pt : sample_points(cfg.boxes, 20))
    EXPECT_LT(max_abs(evaluate(geo.curvature("hM", "hThT"), pt, cfg.space.chart())), 1e-12);
}

TEST(Curvature, SphereVerticalColumnIsMinusKroneckerTimesCurvature) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const Geometry geo = build_geometry(cfg.space);
  const ChartSpec& c = cfg.space.chart();
  for (const Point& pt : sample_points(cfg.boxes, 10)) {
    const NumericTensor v = evaluate(geo.curvature("v", "hMhM"), pt, c);  // [d][i][l][a][j][k]
    const NumericTensor K = evaluate(geo.data.spatial_curvature, pt, c);  // [i][l][j][k]
    v.for_each_index([&](std::span<const int> k) {
      const double expect = k[0] == k[3] ? -K(k[1], k[2], k[4], k[5]) : 0.0;
      EXPECT_NEAR(v.at(k), expect, 1e-12);
    });
  }
}

TEST(Tables, SeveralTimesHaveNoVerticalTorsionOrVerticalCurvature) {
  for (const char* name : {"sphere", "gravitational", "three_time"}) {
    const SpaceConfig cfg = load_config(config_path(name));
    const Geometry geo = build_geometry(cfg.space);
    const ChartSpec& c = cfg.space.chart();
    for (const Point& pt : sample_points(cfg.boxes, 5)) {
      for (const char* col : kTableColumns) {
        EXPECT_LT(max_abs(evaluate(geo.torsion(col, "vhM"), pt, c)), 1e-12) << name << " torsion " << col;
        for (const char* row : {"vhT", "vv"})
          EXPECT_LT(max_abs(evaluate(geo.curvature(col, row), pt, c)), 1e-12) << name << " curvature " << col;
      }
    }
  }
}

}  // namespace
}  // namespace dualjet
