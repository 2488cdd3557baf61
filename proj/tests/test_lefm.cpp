#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wingcrack/benchmarks.hpp"
#include "wingcrack/error.hpp"
#include "wingcrack/lefm.hpp"
#include "wingcrack/oracles.hpp"

using namespace wingcrack;

namespace {

constexpr double kPi = std::numbers::pi;
const double kWing = std::acos(1.0 / 3.0);

Geometry box_with(std::vector<FracturePolyline> fractures) {
  Geometry g;
  g.domain.polygon = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  g.domain.edge_labels = {"bottom", "right", "top", "left"};
  g.domain.vertex_labels = {"sw", "se", "ne", "nw"};
  g.fractures = std::move(fractures);
  return g;
}

FracturePolyline segment(Point a, Point b) {
  FracturePolyline f;
  f.name = "f";
  f.vertices = {a, b};
  return f;
}

SifResult sif(double k_eq, bool propagates) {
  SifResult s;
  s.K_eq = k_eq;
  s.propagates = propagates;
  return s;
}

}  // namespace

TEST(KinkAngle, PureModes) {
  EXPECT_EQ(kink_angle(1.0, 0.0), 0.0);
  EXPECT_NEAR(kink_angle(0.0, 1.0), -kWing, 1e-12);
  EXPECT_NEAR(kink_angle(0.0, -1.0), kWing, 1e-12);
  EXPECT_NEAR(kWing * 180.0 / kPi, 70.5288, 1e-4);
  EXPECT_NEAR(kMaxKinkAngle, kWing, 1e-15);
}

TEST(KinkAngle, OppositeSignToModeTwo) {
  for (double k2 : {-2.0, -0.3, 0.1, 1.0, 5.0}) {
    const double t = kink_angle(1.0, k2);
    EXPECT_LT(t * k2, 0.0);
    EXPECT_LE(std::abs(t), kWing + 1e-12);
  }
}

TEST(KinkAngle, MaximizesHoopStress) {
  for (auto [k1, k2] : {std::pair{1.0, 0.5}, std::pair{0.3, -1.0}, std::pair{2.0, 0.01}}) {
    const double t = kink_angle(k1, k2);
    double best = -1e300, arg = 0.0;
    for (int i = -20000; i <= 20000; ++i) {
      const double th = i * (kPi / 20000.0) * 0.999;
      const double v = tangential_stress_factor(k1, k2, th);
      if (v > best) best = v, arg = th;
    }
    EXPECT_NEAR(t, arg, 2e-4);
    // shear stress vanishes in the kink direction
    EXPECT_NEAR(k1 * std::sin(t) + k2 * (3.0 * std::cos(t) - 1.0), 0.0, 1e-12);
  }
}

TEST(KinkAngle, Errors) {
  EXPECT_THROW(kink_angle(0.0, 0.0), FractureMechanicsError);
  EXPECT_THROW(kink_angle(-1.0, 0.2), FractureMechanicsError);
}

TEST(EquivalentK, Examples) {
  EXPECT_NEAR(equivalent_k(1.3, 0.0, 0.0), 1.3, 1e-15);
  EXPECT_NEAR(equivalent_k(0.0, 1.0, kink_angle(0.0, 1.0)), 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(equivalent_k(0.0, -1.0, kink_angle(0.0, -1.0)), 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(equivalent_k(1.0, 0.5, kink_angle(1.0, 0.5)), equivalent_k(1.0, -0.5, kink_angle(1.0, -0.5)), 1e-14);
}

TEST(Propagation, ThresholdInclusive) {
  Material m;
  m.K_Ic = 2.0;
  EXPECT_FALSE(propagation_check(sif(1.99, false), m));
  EXPECT_TRUE(propagation_check(sif(2.0, false), m));
  EXPECT_TRUE(propagation_check(sif(3.0, false), m));
}

TEST(GrowTip, StraightExtension) {
  const Geometry g = box_with({segment({4, 5}, {6, 5})});
  const GrowthResult b = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5);
  EXPECT_FALSE(b.deactivated);
  EXPECT_NEAR(b.da, 0.5, 1e-15);
  ASSERT_EQ(b.geometry.fractures[0].vertices.size(), 3u);
  EXPECT_NEAR(b.new_tip.x, 6.5, 1e-15);
  EXPECT_NEAR(b.new_tip.y, 5.0, 1e-15);
  const GrowthResult a = grow_tip(g, {0, TipEnd::A}, 0.0, 0.5);
  EXPECT_EQ(a.geometry.fractures[0].vertices.front(), (Point{3.5, 5.0}));
}

TEST(GrowTip, KinkIsCounterclockwise) {
  const Geometry g = box_with({segment({4, 5}, {6, 5})});
  const GrowthResult b = grow_tip(g, {0, TipEnd::B}, kWing, 1.0);
  EXPECT_NEAR(b.new_tip.x, 6.0 + 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(b.new_tip.y, 5.0 + std::sqrt(8.0) / 3.0, 1e-12);
  const GrowthResult a = grow_tip(g, {0, TipEnd::A}, kWing, 1.0);
  EXPECT_NEAR(a.new_tip.x, 4.0 - 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(a.new_tip.y, 5.0 - std::sqrt(8.0) / 3.0, 1e-12);
}

TEST(GrowTip, CrossingFractureDeactivatesAndSplitsHost) {
  const Geometry g = box_with({segment({4, 5}, {6, 5}), segment({6.3, 3}, {6.3, 7})});
  const GrowthResult r = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5);
  EXPECT_TRUE(r.deactivated);
  ASSERT_TRUE(r.hit_fracture);
  EXPECT_EQ(*r.hit_fracture, 1);
  EXPECT_NEAR(r.da, 0.3, 1e-12);
  EXPECT_FALSE(r.geometry.fractures[0].tip_b_active);
  ASSERT_EQ(r.geometry.fractures[1].vertices.size(), 3u);
  EXPECT_NEAR(r.geometry.fractures[1].vertices[1].y, 5.0, 1e-12);
  EXPECT_EQ(r.geometry.fractures[0].vertices.back(), r.geometry.fractures[1].vertices[1]);
}

TEST(GrowTip, SnapsOntoNearbyFracture) {
  // the segment stops 0.1 short, well inside snap_factor * da
  const Geometry g = box_with({segment({4, 5}, {6, 5}), segment({6.6, 3}, {6.6, 7})});
  const GrowthResult r = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5, 0.5);
  EXPECT_TRUE(r.deactivated);
  EXPECT_NEAR(r.da, 0.6, 1e-12);
  const GrowthResult none = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5, 0.0);
  EXPECT_FALSE(none.deactivated);
}

TEST(GrowTip, MeetingTheBoundary) {
  const Geometry g = box_with({segment({4, 5}, {9.8, 5})});
  const GrowthResult r = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5);
  EXPECT_TRUE(r.hit_boundary);
  EXPECT_TRUE(r.deactivated);
  EXPECT_NEAR(r.new_tip.x, 10.0, 1e-12);
}

TEST(GrowTip, MeetingAnotherTipVertex) {
  const Geometry g = box_with({segment({4, 5}, {6, 5}), segment({6.4, 5.02}, {6.4, 3})});
  const GrowthResult r = grow_tip(g, {0, TipEnd::B}, 0.0, 0.5);
  EXPECT_TRUE(r.deactivated);
  EXPECT_EQ(r.new_tip, (Point{6.4, 5.02}));
  EXPECT_FALSE(r.geometry.fractures[1].tip_a_active);
}

TEST(GrowTip, Errors) {
  Geometry g = box_with({segment({4, 5}, {6, 5})});
  EXPECT_THROW(grow_tip(g, {0, TipEnd::B}, 0.0, 0.0), FractureMechanicsError);
  EXPECT_THROW(grow_tip(g, {0, TipEnd::B}, 0.0, -1.0), FractureMechanicsError);
  EXPECT_THROW(grow_tip(g, {3, TipEnd::B}, 0.0, 0.1), FractureMechanicsError);
  g.fractures[0].tip_b_active = false;
  EXPECT_THROW(grow_tip(g, {0, TipEnd::B}, 0.0, 0.1), FractureMechanicsError);
}

TEST(Increments, Scaling) {
  GrowthIncrement inc;
  inc.da_max = 0.2;
  inc.exponent_gamma = 1.0;
  const std::vector<SifResult> one = {sif(3.0, true)};
  EXPECT_DOUBLE_EQ(multi_tip_increments(one, inc)[0], 0.2);
  const std::vector<SifResult> two = {sif(3.0, true), sif(1.5, true), sif(9.0, false)};
  const std::vector<double> da = multi_tip_increments(two, inc);
  EXPECT_DOUBLE_EQ(da[0], 0.2);
  EXPECT_DOUBLE_EQ(da[1], 0.1);
  EXPECT_DOUBLE_EQ(da[2], 0.0);
  inc.exponent_gamma = 0.0;
  EXPECT_DOUBLE_EQ(multi_tip_increments(two, inc)[1], 0.2);
  const std::vector<SifResult> none = {sif(1.0, false)};
  EXPECT_DOUBLE_EQ(multi_tip_increments(none, inc)[0], 0.0);
}

TEST(Extraction, GriffithCrack) {
  const benchmarks::StaticSolve r = benchmarks::solve_static(benchmarks::griffith(0.1));
  const double k1 = oracles::griffith_k1(1.0, 1.0, 20.0);
  ASSERT_EQ(r.sifs.size(), 2u);
  for (const SifResult& s : r.sifs) {
    EXPECT_NEAR(s.K_I, k1, 0.02 * k1);
    EXPECT_LE(std::abs(s.K_II), 0.02 * s.K_I);
    EXPECT_EQ(s.theta0 == 0.0, s.K_II == 0.0);
    EXPECT_LT(std::abs(s.theta0), 0.05);
    EXPECT_FALSE(s.propagates);
  }
}

TEST(Extraction, PropagationFollowsLoadLinearly) {
  Scenario s = benchmarks::griffith(0.2);
  const benchmarks::StaticSolve base = benchmarks::solve_static(s);
  const double k = base.sifs[0].K_eq;
  for (auto [factor, expect] : {std::pair{0.999, false}, std::pair{1.001, true}}) {
    s.material.K_Ic = k;
    for (BoundaryCondition& bc : s.boundary_conditions)
      if (bc.kind == BcKind::Traction) bc.y = *bc.y * factor;
    const benchmarks::StaticSolve r = benchmarks::solve_static(s);
    EXPECT_NEAR(r.sifs[0].K_eq, factor * k, 1e-9 * k);
    EXPECT_EQ(r.sifs[0].propagates, expect);
    for (BoundaryCondition& bc : s.boundary_conditions)
      if (bc.kind == BcKind::Traction) bc.y = *bc.y / factor;
  }
}

TEST(Extraction, ClosedSlidingCrack) {
  const benchmarks::StaticSolve r = benchmarks::solve_static(benchmarks::sliding_crack(0.1));
  const double k2 = oracles::sliding_crack_k2(10.0, kPi / 4.0, 0.6, 0.0, 1.0).K_II;
  for (const SifResult& s : r.sifs) {
    EXPECT_NEAR(std::abs(s.K_II), k2, 0.05 * k2);
    EXPECT_GE(s.K_I, 0.0);
    EXPECT_LE(s.K_I, 0.05 * std::abs(s.K_II));
    EXPECT_NEAR(std::abs(s.theta0), kWing, 3.0 * kPi / 180.0);
  }
}
