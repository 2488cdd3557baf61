#pragma once

#include <string>
#include <vector>

#include "wingcrack/contact.hpp"
#include "wingcrack/error.hpp"
#include "wingcrack/fem.hpp"
#include "wingcrack/lefm.hpp"
#include "wingcrack/mesh.hpp"

namespace wingcrack {

/// Invalid scenario file; the message carries the field path and line.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& path, int line, const std::string& what);
  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

struct AdaptivitySettings {
  bool enabled = false;
  double theta = 0.5;
  double target_relative_error = 0.05;
  int max_passes = 2;
  /// Growth cavity radius in multiples of the increment.
  double cavity_factor = 3.0;
  bool operator==(const AdaptivitySettings&) const = default;
};

struct StepCaps {
  int max_propagation_per_load = 50;
  int max_total_steps = 100;
  bool operator==(const StepCaps&) const = default;
};

struct OutputSettings {
  std::string directory = "output";
  /// 0 disables VTK snapshots.
  int vtk_every = 0;
  bool operator==(const OutputSettings&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  Geometry geometry;
  Material material;
  Vec2 body_force{0.0, 0.0};
  std::vector<BoundaryCondition> boundary_conditions;
  /// Fraction of the full load per step, non-decreasing.
  std::vector<double> load_steps{1.0};
  SolverOptions solver;
  /// Zero scalings are replaced by E / h_tip when the run starts.
  ActiveSetConfig contact{0.0, 0.0, 30, 1e-8, 1e-6, 1e-10};
  GrowthIncrement growth;
  StepCaps caps;
  MeshOptions mesh;
  AdaptivitySettings adaptivity;
  OutputSettings output;

  bool operator==(const Scenario&) const = default;
};

enum class ParseMode { Strict, Permissive };

Scenario parse_scenario_file(const std::string& path, ParseMode mode = ParseMode::Strict);
Scenario parse_scenario(const std::string& text, ParseMode mode = ParseMode::Strict);

/// Complete YAML text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Throws ScenarioError naming the first invalid field.
void validate_scenario(const Scenario& scenario);

}  // namespace wingcrack
