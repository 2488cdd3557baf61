#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wingcrack/contact.hpp"
#include "wingcrack/lefm.hpp"
#include "wingcrack/scenario.hpp"

namespace wingcrack {

enum class Termination { Converged, StepCap, Error };

const char* to_string(Termination t);

struct ContactSummary {
  std::size_t open = 0;
  std::size_t stick = 0;
  std::size_t slip = 0;
  int iterations = 0;
  bool cycling_fallback = false;
  KktResiduals residuals;
};

struct MeshStats {
  std::size_t nodes = 0;
  std::size_t elements = 0;
  double min_quality_deg = 0.0;
};

/// One equilibrium solve and its tip evaluation.
struct StepRecord {
  int step = 0;
  int load_step = 0;
  double load_fraction = 0.0;
  /// Growth increments already taken within this load step.
  int propagation = 0;
  std::vector<SifResult> sifs;
  /// Applied increment per tip (0 when it did not grow) and the outcome:
  /// grew, coalesced, boundary, subcritical or capped.
  std::vector<double> da;
  std::vector<std::string> tip_status;
  /// Applied growth direction from the tip tangent (radians); theta0 unless corrected.
  std::vector<double> growth_angle;
  /// Trial solves spent on direction corrections.
  int direction_trials = 0;
  ContactSummary contact;
  MeshStats mesh;
  double relative_error = 0.0;
  int refinement_passes = 0;
  double wall_time = 0.0;
};

struct StepView {
  const StepRecord& record;
  const Mesh& mesh;
  const DisplacementField& u;
  std::span<const ContactPair> pairs;
  const ContactState& contact;
  const Geometry& geometry_after;
};

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<int> max_steps;
  std::optional<int> vtk_every;
  bool write_files = true;
  /// Progress lines go here unless null.
  std::ostream* log = nullptr;
  std::function<void(const StepView&)> on_step;
};

struct RunResult {
  std::vector<StepRecord> records;
  Termination termination = Termination::Converged;
  std::string message;
  Geometry final_geometry;
  /// Growth increments taken over the whole run.
  int growth_steps = 0;
};

/// Load-step / contact / SIF / growth / remesh loop. Module errors end the run with
/// Termination::Error after the outputs written so far are flushed.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace wingcrack
