#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wingcrack/fem.hpp"
#include "wingcrack/mesh.hpp"

namespace wingcrack {

struct SifResult {
  TipRef tip;
  Point position;
  double K_I = 0.0;
  double K_II = 0.0;
  /// Radians from the current tip tangent, counterclockwise positive.
  double theta0 = 0.0;
  double K_eq = 0.0;
  bool propagates = false;
};

struct GrowthIncrement {
  double da_max = 0.1;
  double exponent_gamma = 1.0;
  /// A growth segment that would stop short of a fracture or the boundary by less than
  /// snap_factor * da is extended to meet it.
  double snap_factor = 0.5;
  /// Secant corrections of the growth angle so that K_II vanishes at the new tip; 0 grows along theta0.
  /// Not applied to the first kink out of a pre-existing flaw.
  int direction_iterations = 4;
  /// MTS angle at the trial tip below which a corrected direction is accepted.
  double direction_tolerance_deg = 0.5;
  bool operator==(const GrowthIncrement&) const = default;
};

/// Largest kink magnitude, reached in pure mode II: arccos(1/3).
inline const double kMaxKinkAngle = std::acos(1.0 / 3.0);

/// Two-point displacement correlation on the quarter-point crack faces behind the tip.
std::pair<double, double> extract_sif(const Mesh& mesh, const Material& material, const DisplacementField& u,
                                      TipRef tip);

/// Near-tip hoop stress factor cos(t/2) [K_I cos^2(t/2) - 1.5 K_II sin t].
double tangential_stress_factor(double K_I, double K_II, double theta);

/// Maximum tangential stress direction; throws FractureMechanicsError for zero SIFs or negative K_I.
double kink_angle(double K_I, double K_II);

double equivalent_k(double K_I, double K_II, double theta0);

bool propagation_check(const SifResult& sif, const Material& material);

/// Extraction plus kink angle, K_eq and the propagation flag. Zero SIFs give theta0 = 0, K_eq = 0.
SifResult evaluate_tip(const Mesh& mesh, const Material& material, const DisplacementField& u, TipRef tip);

struct GrowthResult {
  Geometry geometry;
  Point new_tip;
  double da = 0.0;
  bool deactivated = false;
  /// Fracture hit by the growth segment, if any.
  std::optional<int> hit_fracture;
  bool hit_boundary = false;
};

/// Appends one segment at the tip along the tangent rotated by theta0. Crossing a fracture or the
/// boundary truncates the segment there and deactivates the tip; a hit fracture gains a vertex.
GrowthResult grow_tip(const Geometry& geometry, TipRef tip, double theta0, double da,
                      double snap_factor = 0.5);

/// da_i = da_max (K_eq,i / max K_eq)^gamma for propagating tips, 0 otherwise.
std::vector<double> multi_tip_increments(std::span<const SifResult> sifs, const GrowthIncrement& inc);

}  // namespace wingcrack
