#pragma once

#include <span>
#include <string>
#include <vector>

#include "wingcrack/fem.hpp"
#include "wingcrack/mesh.hpp"

namespace wingcrack {

enum class ContactStatus { Open, Stick, Slip };

const char* to_string(ContactStatus status);

enum class ContactWeighting {
  /// Integrals of the quadratic face shape functions; reproduces uniform tractions exactly.
  Consistent,
  /// Half the distance to each neighbouring station.
  Tributary,
};

struct ContactPair {
  int plus_node = -1;
  int minus_node = -1;
  /// From the minus face toward the plus face.
  Vec2 normal{0.0, 1.0};
  /// Normal rotated by +90 degrees.
  Vec2 tangent{-1.0, 0.0};
  double initial_gap = 0.0;
  double weight = 0.0;
  int fracture = 0;
  /// Arc length from the first polyline vertex.
  double arc = 0.0;
  double friction_mu = 0.0;
  double cohesion_c = 0.0;
};

struct ActiveSetConfig {
  double c_n = 1.0;
  double c_t = 1.0;
  int max_iterations = 30;
  double tol_g = 1e-8;
  double tol_lambda = 1e-6;
  double tol_c = 1e-10;
  bool operator==(const ActiveSetConfig&) const = default;
};

/// c_n = c_t = E / h_tip.
ActiveSetConfig default_active_set(const Material& material, const SizeField& size);

struct KktResiduals {
  double max_penetration = 0.0;
  double max_negative_pressure = 0.0;
  double max_complementarity = 0.0;
  double max_friction_violation = 0.0;
  /// |slip| on Stick pairs.
  double max_stick_slip = 0.0;
  /// Distance of lambda_t from the Coulomb limit opposing the slip, on Slip pairs.
  double max_slip_law = 0.0;
  /// |lambda| on Open pairs.
  double max_open_multiplier = 0.0;

  bool within(const ActiveSetConfig& cfg) const;
  std::string describe() const;
};

struct ContactState {
  std::vector<ContactStatus> status;
  std::vector<double> lambda_n;
  std::vector<double> lambda_t;
  std::vector<double> gap;
  std::vector<double> slip;
  int iterations = 0;
  bool cycling_fallback = false;
  KktResiduals residuals;

  std::size_t count(ContactStatus s) const;
};

struct ContactSolution {
  DisplacementField u;
  ContactState state;
};

/// One pair per duplicated station; tips and junction nodes carry none and pass their weight on.
std::vector<ContactPair> build_contact_pairs(const Mesh& mesh,
                                             ContactWeighting weighting = ContactWeighting::Consistent);

/// Primal-dual active-set iteration on the Delassus operator of the paired nodes.
/// Throws ContactError when the iteration cap is hit or the reduced system is singular.
ContactSolution solve_contact(const FactorizedSystem& factor, std::span<const ContactPair> pairs,
                              const ActiveSetConfig& cfg);

/// Convenience overload that factorizes the system itself.
ContactSolution solve_contact(const LinearSystem& system, std::span<const ContactPair> pairs,
                              const ActiveSetConfig& cfg, const SolverOptions& solver = {});

KktResiduals kkt_residuals(const ContactState& state, std::span<const ContactPair> pairs, double tol_g = 0.0);

/// Gap and slip of every pair for a displacement field.
void measure_jumps(std::span<const ContactPair> pairs, const DisplacementField& u, std::vector<double>& gap,
                   std::vector<double>& slip);

}  // namespace wingcrack
