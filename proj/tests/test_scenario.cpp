#include <string>

#include <gtest/gtest.h>

#include "wingcrack/benchmarks.hpp"
#include "wingcrack/scenario.hpp"

using namespace wingcrack;

namespace {

const char* kMinimal = R"(name: tiny
domain:
  polygon: [[0, 0], [2, 0], [2, 2], [0, 2]]
  edge_labels: [bottom, right, top, left]
material:
  youngs_E: 100
  poisson_nu: 0.3
  mode: plane_stress
  K_Ic: 1
boundary_conditions:
  - {label: bottom, kind: displacement, value: [0, 0]}
  - {label: top, kind: traction, value: [0, 1]}
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

}  // namespace

TEST(Scenario, MinimalFileGetsDefaults) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.geometry.domain.polygon.size(), 4u);
  EXPECT_EQ(s.geometry.domain.vertex_labels.size(), 4u);
  EXPECT_EQ(s.material.mode, PlaneMode::PlaneStress);
  EXPECT_DOUBLE_EQ(s.material.poisson_nu, 0.3);
  ASSERT_EQ(s.boundary_conditions.size(), 2u);
  EXPECT_EQ(s.boundary_conditions[1].kind, BcKind::Traction);
  EXPECT_TRUE(s.geometry.fractures.empty());
  EXPECT_EQ(s.growth, GrowthIncrement{});
  EXPECT_EQ(s.caps, StepCaps{});
}

TEST(Scenario, IncompressiblePoissonRejectedByName) {
  std::string text = kMinimal;
  text.replace(text.find("poisson_nu: 0.3"), 15, "poisson_nu: 0.5");
  try {
    parse_scenario(text);
    FAIL() << "accepted nu = 0.5";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.path(), "material.poisson_nu");
    EXPECT_EQ(e.line(), 7);
  }
}

TEST(Scenario, UnknownKeyReportsLine) {
  try {
    parse_scenario(with("colour: blue\n"));
    FAIL() << "accepted an unknown key";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.path(), "colour");
    EXPECT_EQ(e.line(), 13);
    EXPECT_NE(std::string(e.what()).find("line 13"), std::string::npos);
  }
}

TEST(Scenario, PermissiveModeIgnoresUnknownKeys) {
  const Scenario s = parse_scenario(with("colour: blue\n"), ParseMode::Permissive);
  EXPECT_EQ(s.name, "tiny");
}

TEST(Scenario, PlaneModeIsRequired) {
  std::string text = kMinimal;
  text.erase(text.find("  mode: plane_stress\n"), 21);
  try {
    parse_scenario(text);
    FAIL() << "accepted a material without mode";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.path(), "material.mode");
  }
}

TEST(Scenario, MissingSectionsAndFiles) {
  EXPECT_THROW(parse_scenario("name: x\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(""), ScenarioError);
  EXPECT_THROW(parse_scenario("domain: [1, 2\n"), ScenarioError);
  EXPECT_THROW(parse_scenario_file("/nonexistent/scenario.yaml"), ScenarioError);
}

TEST(Scenario, FreeComponentAndLoadSteps) {
  const Scenario s = parse_scenario(with("  - {label: left, kind: displacement, value: [~, 0]}\n"
                                         "solver:\n  load_steps: [0.25, 1.0]\n"));
  ASSERT_EQ(s.boundary_conditions.size(), 3u);
  EXPECT_FALSE(s.boundary_conditions[2].x.has_value());
  EXPECT_EQ(s.boundary_conditions[2].y, 0.0);
  EXPECT_EQ(s.load_steps, (std::vector<double>{0.25, 1.0}));
  const Scenario t = parse_scenario(with("solver:\n  load_steps: 4\n"));
  EXPECT_EQ(t.load_steps, (std::vector<double>{0.25, 0.5, 0.75, 1.0}));
}

TEST(Scenario, InvalidValuesRejected) {
  EXPECT_THROW(parse_scenario(with("growth:\n  da_max: -1\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(with("growth:\n  direction_iterations: -1\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(with("mesh:\n  h_tip: 0\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(with("solver:\n  load_steps: [0.5, 0.25]\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(with("fractures:\n  - {vertices: [[5, 5], [6, 6]]}\n")), ScenarioError);
}

TEST(Scenario, RoundTripBenchmarks) {
  for (const Scenario& s : {benchmarks::griffith(), benchmarks::sliding_crack(), benchmarks::en_echelon()}) {
    const Scenario back = parse_scenario(serialize_scenario(s));
    EXPECT_EQ(back, s) << s.name;
  }
}

TEST(Scenario, RoundTripBundledFiles) {
  for (const char* name : {"griffith", "inclined_flaw", "en_echelon"}) {
    const Scenario s = parse_scenario_file(std::string(WINGCRACK_SOURCE_DIR "/scenarios/") + name + ".yaml");
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s) << name;
  }
}
