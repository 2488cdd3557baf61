#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "wingcrack/adaptivity.hpp"
#include "wingcrack/benchmarks.hpp"
#include "wingcrack/fem.hpp"
#include "wingcrack/lefm.hpp"
#include "wingcrack/mesh.hpp"

using namespace wingcrack;

namespace {

Geometry square() {
  Geometry g;
  g.domain.polygon = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  g.domain.edge_labels = {"bottom", "right", "top", "left"};
  g.domain.vertex_labels = {"sw", "se", "ne", "nw"};
  return g;
}

Mesh square_mesh(double h) {
  MeshOptions o;
  o.size = {h, h, 0.3};
  return triangulate(square(), o);
}

Material material() {
  Material m;
  m.youngs_E = 100.0;
  m.poisson_nu = 0.3;
  return m;
}

ErrorField field(std::vector<double> eta_e) {
  ErrorField e;
  e.eta_e = std::move(eta_e);
  double s = 0.0;
  for (double v : e.eta_e) s += v * v;
  e.eta = std::sqrt(s);
  return e;
}

}  // namespace

TEST(Recovery, UniformStressIsExact) {
  const Mesh mesh = square_mesh(0.2);
  const Material m = material();
  const std::vector<BoundaryCondition> bcs = {{"bottom", BcKind::Displacement, std::nullopt, 0.0},
                                              {"sw", BcKind::Displacement, 0.0, std::nullopt},
                                              {"top", BcKind::Traction, 0.5, 2.0},
                                              {"right", BcKind::Traction, 1.0, 0.5},
                                              {"left", BcKind::Traction, -1.0, -0.5},
                                              {"bottom", BcKind::Traction, -0.5, 0.0}};
  const DisplacementField u = solve(assemble(mesh, m, bcs));
  const GaussStresses sh = stress_at_gauss_points(mesh, m, u);
  const std::vector<Stress> star = recover_stress(mesh, sh);
  ASSERT_EQ(star.size(), mesh.nodes.size());
  for (const Stress& s : star) {
    EXPECT_NEAR(s.xx, 1.0, 1e-9);
    EXPECT_NEAR(s.yy, 2.0, 1e-9);
    EXPECT_NEAR(s.xy, 0.5, 1e-9);
  }
  const ErrorField err = zz_error(mesh, m, sh, star);
  EXPECT_LE(err.eta, 1e-9 * err.recovered_norm);
}

TEST(Recovery, LinearStressIsExact) {
  // u = (a x^2, 0) with the matching uniform body force; P2 reproduces it exactly
  const Mesh mesh = square_mesh(0.2);
  const Material m = material();
  const double a = 1e-3;
  const double lambda = m.youngs_E * m.poisson_nu / ((1 + m.poisson_nu) * (1 - 2 * m.poisson_nu));
  const double mu = m.shear_modulus();
  AssemblyOptions ao;
  ao.body_force = {-2.0 * a * (lambda + 2.0 * mu), 0.0};
  for (const BoundaryEdge& b : mesh.boundary_edges)
    for (int n : b.nodes) {
      const Point p = mesh.nodes[static_cast<std::size_t>(n)];
      ao.extra_constraints.push_back({2 * n, a * p.x * p.x});
      ao.extra_constraints.push_back({2 * n + 1, 0.0});
    }
  const DisplacementField u = solve(assemble(mesh, m, {}, ao));
  const std::vector<Stress> star = recover_stress(mesh, stress_at_gauss_points(mesh, m, u));
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    const double x = mesh.nodes[n].x;
    EXPECT_NEAR(star[n].xx, 2.0 * a * x * (lambda + 2.0 * mu), 1e-10);
    EXPECT_NEAR(star[n].yy, 2.0 * a * x * lambda, 1e-10);
    EXPECT_NEAR(star[n].xy, 0.0, 1e-10);
  }
}

TEST(Recovery, ErrorConcentratesAtTips) {
  const benchmarks::StaticSolve r = benchmarks::solve_static(benchmarks::griffith(0.2));
  const Material m = benchmarks::griffith().material;
  const GaussStresses sh = stress_at_gauss_points(r.mesh, m, r.contact.u);
  const ErrorField err = zz_error(r.mesh, m, sh, recover_stress(r.mesh, sh));
  ASSERT_EQ(err.eta_e.size(), r.mesh.elements.size());
  const auto worst = static_cast<int>(std::max_element(err.eta_e.begin(), err.eta_e.end()) - err.eta_e.begin());
  const auto p = r.mesh.element_points(worst);
  const Point c{(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0};
  const double d = std::min(distance(c, {9, 10}), distance(c, {11, 10}));
  EXPECT_LT(d, 2.0 * 0.2);
  EXPECT_GT(err.eta, 0.0);
}

TEST(Marking, Doerfler) {
  EXPECT_EQ(mark_elements(field(std::vector<double>(8, 1.0)), 0.5).size(), 2u);
  EXPECT_EQ(mark_elements(field(std::vector<double>(10, 1.0)), 0.5).size(), 3u);
  EXPECT_EQ(mark_elements(field({0.1, 10.0, 0.1}), 0.5), (std::vector<int>{1}));
  EXPECT_TRUE(mark_elements(field({0.0, 0.0, 0.0}), 0.5).empty());
  EXPECT_EQ(mark_elements(field({1.0, 2.0, 3.0}), 1.0).size(), 3u);
  // ties resolved by element id
  EXPECT_EQ(mark_elements(field({1.0, 1.0, 1.0, 1.0}), 0.5), (std::vector<int>{0}));
}

TEST(Remesh, NoGrowthKeepsMesh) {
  const Scenario s = benchmarks::griffith(0.2);
  const Mesh m = triangulate(s.geometry, s.mesh);
  const Mesh r = remesh_after_growth(m, s.geometry, {}, s.mesh.size);
  EXPECT_EQ(r.nodes.size(), m.nodes.size());
  EXPECT_EQ(r.elements.size(), m.elements.size());
  EXPECT_TRUE(check_invariants(r).empty());
}

TEST(Remesh, StraightExtension) {
  const Scenario s = benchmarks::griffith(0.2);
  const Mesh m = triangulate(s.geometry, s.mesh);
  const TipRef tip{0, TipEnd::B};
  const GrowthResult g = grow_tip(s.geometry, tip, 0.0, 0.3);
  const std::vector<GrownTip> grown = {{tip, {11, 10}, g.new_tip}};
  const Mesh r = remesh_after_growth(m, g.geometry, grown, s.mesh.size);
  ASSERT_TRUE(check_invariants(r).empty());
  EXPECT_GE(min_quality_angle(r), 20.0);
  const TipRosette* t = r.find_tip(tip);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(r.nodes[static_cast<std::size_t>(t->node)], (Point{11.3, 10.0}));
  bool old_tip_split = false;
  for (const FaceStation& st : r.stations[0])
    if (r.nodes[static_cast<std::size_t>(st.plus)] == Point{11, 10}) old_tip_split = st.plus != st.minus;
  EXPECT_TRUE(old_tip_split);
  // the untouched tip keeps its rosette
  const TipRosette* a0 = m.find_tip({0, TipEnd::A});
  const TipRosette* a1 = r.find_tip({0, TipEnd::A});
  ASSERT_TRUE(a0 && a1);
  EXPECT_EQ(a0->radius, a1->radius);
}
