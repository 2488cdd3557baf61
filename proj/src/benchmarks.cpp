#include "wingcrack/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wingcrack/oracles.hpp"

namespace wingcrack::benchmarks {

namespace {

Scenario plate(const std::string& name, double h_tip) {
  Scenario s;
  s.name = name;
  s.geometry.domain.polygon = {{0, 0}, {20, 0}, {20, 20}, {0, 20}};
  s.geometry.domain.edge_labels = {"bottom", "right", "top", "left"};
  s.geometry.domain.vertex_labels = {"sw", "se", "ne", "nw"};
  s.material.poisson_nu = 0.25;
  s.material.mode = PlaneMode::PlaneStrain;
  s.mesh.size = {h_tip, 2.0, 0.25};
  s.output.directory = "out/" + name;
  return s;
}

void vertical_load(Scenario& s, double sigma) {
  s.boundary_conditions = {{"top", BcKind::Traction, 0.0, sigma},
                           {"bottom", BcKind::Traction, 0.0, -sigma},
                           {"sw", BcKind::Displacement, 0.0, 0.0},
                           {"se", BcKind::Displacement, std::nullopt, 0.0}};
}

void compression_settings(Scenario& s) {
  s.material.youngs_E = 1e4;
  s.material.K_Ic = 0.5;
  vertical_load(s, -10.0);
  // tolerances scaled to a = 1 and sigma = 10
  s.contact.tol_g = 1e-8;
  s.contact.tol_lambda = 1e-6 * 10.0;
  s.contact.tol_c = 1e-10 * 10.0;
  s.growth.da_max = 0.15;
  s.caps = {20, 20};
}

}  // namespace

Scenario griffith(double h_tip) {
  Scenario s = plate("griffith", h_tip);
  s.material.youngs_E = 1000.0;
  s.material.K_Ic = 1000.0;
  FracturePolyline f;
  f.name = "crack";
  f.vertices = {{9, 10}, {11, 10}};
  s.geometry.fractures = {f};
  vertical_load(s, 1.0);
  return s;
}

Scenario sliding_crack(double h_tip) {
  Scenario s = plate("sliding_crack", h_tip);
  compression_settings(s);
  const double c = std::cos(std::numbers::pi / 4.0);
  FracturePolyline f;
  f.name = "flaw";
  f.vertices = {{10.0 - c, 10.0 - c}, {10.0 + c, 10.0 + c}};
  f.friction_mu = 0.6;
  s.geometry.fractures = {f};
  return s;
}

Scenario en_echelon() {
  Scenario s = plate("en_echelon", 0.1);
  compression_settings(s);
  FracturePolyline lower, upper;
  lower.name = "lower";
  lower.vertices = {{8.29, 8.29}, {9.71, 9.71}};
  lower.friction_mu = 0.6;
  upper.name = "upper";
  upper.vertices = {{9.0, 10.2}, {10.4, 11.6}};
  upper.friction_mu = 0.6;
  s.geometry.fractures = {lower, upper};
  s.growth.exponent_gamma = 0.0;
  s.caps = {40, 40};
  return s;
}

StaticSolve solve_static(const Scenario& scenario) {
  validate_scenario(scenario);
  StaticSolve out;
  out.mesh = triangulate(scenario.geometry, scenario.mesh);
  AssemblyOptions ao;
  ao.body_force = scenario.body_force;
  const LinearSystem sys = assemble(out.mesh, scenario.material, scenario.boundary_conditions, ao);
  out.pairs = build_contact_pairs(out.mesh);
  ActiveSetConfig cfg = scenario.contact;
  if (cfg.c_n <= 0.0) cfg.c_n = scenario.material.youngs_E / scenario.mesh.size.h_tip;
  if (cfg.c_t <= 0.0) cfg.c_t = scenario.material.youngs_E / scenario.mesh.size.h_tip;
  const FactorizedSystem factor(sys, scenario.solver);
  out.contact = solve_contact(factor, out.pairs, cfg);
  for (TipRef t : scenario.geometry.active_tips())
    out.sifs.push_back(evaluate_tip(out.mesh, scenario.material, out.contact.u, t));
  return out;
}

std::vector<Check> verify() {
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double expected, double tol) {
    checks.push_back({std::move(name), value, expected, tol, std::abs(value - expected) <= tol});
  };

  const StaticSolve g = solve_static(griffith());
  const double k1 = oracles::griffith_k1(1.0, 1.0, 20.0);
  for (const SifResult& s : g.sifs) {
    add("griffith K_I tip " + to_string(s.tip), s.K_I, k1, 0.02 * k1);
    add("griffith K_II tip " + to_string(s.tip), s.K_II, 0.0, 0.02 * s.K_I);
  }

  const Scenario sc = sliding_crack();
  const StaticSolve sl = solve_static(sc);
  const auto oracle = oracles::sliding_crack_k2(10.0, std::numbers::pi / 4.0, 0.6, 0.0, 1.0);
  for (const SifResult& s : sl.sifs) {
    add("sliding |K_II| tip " + to_string(s.tip), std::abs(s.K_II), oracle.K_II, 0.05 * oracle.K_II);
    add("sliding K_I tip " + to_string(s.tip), s.K_I, 0.0, 0.05 * std::abs(s.K_II));
    const double expected = kink_angle(0.0, std::copysign(oracle.K_II, s.K_II));
    add("kink angle deg tip " + to_string(s.tip), s.theta0 * 180.0 / std::numbers::pi,
        expected * 180.0 / std::numbers::pi, 3.0);
  }
  const KktResiduals& r = sl.contact.state.residuals;
  add("sliding KKT residuals within tolerance", r.within(sc.contact) ? 1.0 : 0.0, 1.0, 0.0);
  add("sliding active-set iterations <= 30", sl.contact.state.iterations, 30.0, 30.0);
  checks.back().passed = sl.contact.state.iterations <= 30 && !sl.contact.state.cycling_fallback;
  add("pure shear wing angle deg", std::abs(kink_angle(0.0, 1.0)) * 180.0 / std::numbers::pi,
      oracles::pure_shear_wing_angle() * 180.0 / std::numbers::pi, 1e-9);
  return checks;
}

}  // namespace wingcrack::benchmarks
