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
using testing::fixture_path;
using testing::sample_points;

VerifyResult run(const SpaceConfig& cfg, int samples = 100) {
  VerifyOptions opt;
  opt.samples = samples;
  opt.seed = cfg.seed;
  opt.tol = cfg.tolerances;
  return verify_space(cfg.space, cfg.boxes, opt, cfg.hook());
}

TEST(VerifySpace, EveryBundledSpacePasses) {
  for (const std::string& name : bundled_configs()) {
    const SpaceConfig cfg = load_config(config_path(name));
    const VerifyResult result = run(cfg);
    EXPECT_EQ(result.points.size(), 100u);
    for (const Check& c : result.report.checks)
      EXPECT_TRUE(c.passed()) << name << ": " << c.name << " = " << c.max_residual << " " << c.note;
  }
}

TEST(VerifySpace, FaultInjectionBreaksTheMetricCondition) {
  const SpaceConfig cfg = load_config(fixture_path("sphere_faulty"));
  const VerifyResult result = run(cfg);
  EXPECT_FALSE(result.report.passed());
  const Check* metric = result.report.find("g_{ij|k}");
  ASSERT_NE(metric, nullptr);
  EXPECT_FALSE(metric->passed());
  EXPECT_GT(metric->max_residual, 1e-4);
}

TEST(VerifySpace, IsDeterministic) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const VerifyResult a = run(cfg, 30), b = run(cfg, 30);
  ASSERT_EQ(a.report.checks.size(), b.report.checks.size());
  for (std::size_t k = 0; k < a.report.checks.size(); ++k) {
    EXPECT_EQ(a.report.checks[k].name, b.report.checks[k].name);
    EXPECT_EQ(a.report.checks[k].max_residual, b.report.checks[k].max_residual);
  }
}

TEST(VerifySpace, DegenerateSamplesAreReported) {
  SpaceConfig cfg = load_config(fixture_path("degenerate"));
  cfg.boxes.set(cfg.space.chart().x(0), Interval{0.0, 0.0});
  EXPECT_THROW(run(cfg, 5), DegenerateMetricError);
}

TEST(FdCheck, AcceptsCorrectDerivatives) {
  const ChartSpec c(1, 2);
  const Expr e = parse_scalar("exp(x1)*sin(x2*p1_1) + t1^3", c);
  const Check check = fd_check(e, sample_points(SampleBoxes(c), 20), c);
  EXPECT_TRUE(check.passed()) << check.max_residual;
  EXPECT_LT(check.max_residual, 1e-8);
}

TEST(FdCheck, DomainErrorsPropagate) {
  const ChartSpec c(1, 1);
  SampleBoxes boxes(c);
  boxes.set(c.x(0), Interval{1e-300, 2e-300});
  const Expr e = parse_scalar("1/x1^3", c);
  EXPECT_THROW(fd_check(e, sample_points(boxes, 2), c), DomainError);
}

TEST(FdCheck, RejectsUnreasonableSteps) {
  const ChartSpec c(1, 1);
  const Expr e = parse_scalar("x1", c);
  EXPECT_THROW(fd_check(e, sample_points(SampleBoxes(c), 2), c, 1e-2), ConfigError);
}

TEST(Transformations, ConnectionTransportsUnderAffineMaps) {
  for (const std::string& name : bundled_configs()) {
    const SpaceConfig cfg = load_config(config_path(name));
    const std::vector<Point> pts = sample_points(cfg.boxes, 20);
    for (const AffineChartMap& map : builtin_chart_maps(cfg.space.chart())) {
      const Check c = nlc_transformation_check(cfg.space, map, pts, 1e-9);
      EXPECT_TRUE(c.passed()) << name << ": " << c.name << " " << c.max_residual;
    }
  }
}

TEST(Transformations, MapsAreAffineWithTheExpectedMomentumLaw) {
  const ChartSpec c(2, 2);
  const auto maps = builtin_chart_maps(c);
  ASSERT_EQ(maps.size(), 3u);
  Point pt = Point::zeros(c);
  pt.t = {1.0, 2.0};
  pt.x = {3.0, 4.0};
  pt.p = {{1.0, 2.0}, {3.0, 4.0}};
  const Point scaled = map_point(pt, maps[1], c);  // t -> 2t, p -> 2p
  EXPECT_EQ(scaled.t, (std::vector<double>{2.0, 4.0}));
  EXPECT_EQ(scaled.p[1], (std::vector<double>{6.0, 8.0}));
  const Point sheared = map_point(pt, maps[2], c);  // x~ = (x1 + x2, x2), p~ = p B^-1
  EXPECT_EQ(sheared.x, (std::vector<double>{7.0, 4.0}));
  EXPECT_EQ(sheared.p[0], (std::vector<double>{1.0, 1.0}));
}

TEST(Transformations, SingularMapsAreRejected) {
  const SpaceConfig cfg = load_config(config_path("flat"));
  AffineChartMap singular = builtin_chart_maps(cfg.space.chart())[0];
  singular.spatial = {{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(nlc_transformation_check(cfg.space, singular, sample_points(cfg.boxes, 2), 1e-9), ConfigError);
}

TEST(Regularity, ChecksReportFactorizationAndReassembly) {
  const SpaceConfig cfg = load_config(config_path("sphere"));
  const ResidualReport r = regularity_check(cfg.space, cfg.boxes, 50, 1, 1e-12);
  ASSERT_NE(r.find("Kronecker factorization"), nullptr);
  ASSERT_NE(r.find("decompose-reassemble H"), nullptr);
  EXPECT_TRUE(r.passed());
  const SpaceConfig quartic = load_config(config_path("nonquadratic_m1"));
  EXPECT_EQ(regularity_check(quartic.space, quartic.boxes, 50, 1, 1e-12).find("decompose-reassemble H"), nullptr);
}

TEST(Report, CheckPassesOnlyWithinTolerance) {
  EXPECT_TRUE((Check{"a", 1e-10, 1, 1e-9, {}}).passed());
  EXPECT_FALSE((Check{"a", 2e-9, 1, 1e-9, {}}).passed());
  EXPECT_FALSE((Check{"a", std::nan(""), 1, 1e-9, {}}).passed());
}

}  // namespace
}  // namespace dualjet
