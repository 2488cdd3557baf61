#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wingcrack/mesh.hpp"

namespace wingcrack {

enum class PlaneMode { PlaneStrain, PlaneStress };

struct Material {
  double youngs_E = 1.0;
  double poisson_nu = 0.25;
  PlaneMode mode = PlaneMode::PlaneStrain;
  double K_Ic = 1.0;

  double shear_modulus() const { return youngs_E / (2.0 * (1.0 + poisson_nu)); }
  /// Kolosov constant.
  double kappa() const {
    return mode == PlaneMode::PlaneStrain ? 3.0 - 4.0 * poisson_nu : (3.0 - poisson_nu) / (1.0 + poisson_nu);
  }
  /// Maps (exx, eyy, gxy) to (sxx, syy, sxy).
  Eigen::Matrix3d elasticity() const;
  bool operator==(const Material&) const = default;
};

/// Throws Error naming the offending field.
void validate_material(const Material& material);

enum class BcKind { Displacement, Traction };

/// Applies to every boundary edge with a matching domain-edge label, or to the node at a matching
/// domain-vertex label (displacement only). Missing components are left free.
struct BoundaryCondition {
  std::string label;
  BcKind kind = BcKind::Displacement;
  std::optional<double> x;
  std::optional<double> y;
  bool operator==(const BoundaryCondition&) const = default;
};

struct DofConstraint {
  int dof = 0;
  double value = 0.0;
};

struct AssemblyOptions {
  /// Multiplies every traction and prescribed displacement.
  double load_scale = 1.0;
  Vec2 body_force{0.0, 0.0};
  /// Constraints applied on top of the boundary conditions (unscaled).
  std::vector<DofConstraint> extra_constraints;
};

/// Two DOFs per node, interleaved (2 i, 2 i + 1). Prescribed DOFs are eliminated symmetrically.
struct LinearSystem {
  int n_dofs = 0;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd f;
  std::vector<bool> prescribed;
  /// Prescribed values (zero on free DOFs).
  Eigen::VectorXd u_prescribed;
  /// Full DOF id per reduced index, and the reverse map (-1 for prescribed DOFs).
  std::vector<int> free_dofs;
  std::vector<int> free_index;
  Eigen::SparseMatrix<double> K_ff;
  /// f_f - K_fp u_p.
  Eigen::VectorXd rhs;
};

struct DisplacementField {
  Eigen::VectorXd dofs;
  Vec2 at(int node) const { return {dofs[2 * node], dofs[2 * node + 1]}; }
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterative_steps = 20000;
  bool operator==(const SolverOptions&) const = default;
};

Eigen::Matrix<double, 12, 12> element_stiffness(const std::array<Point, 6>& x, const Material& material);

/// Throws FloatingStructureError when the constraints leave rigid-body modes.
LinearSystem assemble(const Mesh& mesh, const Material& material, std::span<const BoundaryCondition> bcs,
                      const AssemblyOptions& options = {});

/// Sparse LDLT of K_ff with a preconditioned conjugate-gradient fallback.
class FactorizedSystem {
 public:
  explicit FactorizedSystem(const LinearSystem& system, SolverOptions options = {});
  ~FactorizedSystem();
  FactorizedSystem(const FactorizedSystem&) = delete;
  FactorizedSystem& operator=(const FactorizedSystem&) = delete;

  /// Solves K_ff x = b in the reduced space; throws SolverError when the residual stays above tolerance.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  const LinearSystem& system() const { return *system_; }
  bool iterative() const { return iterative_; }

 private:
  struct Impl;
  const LinearSystem* system_;
  SolverOptions options_;
  bool iterative_ = false;
  std::unique_ptr<Impl> impl_;
};

/// Full displacement vector from reduced free values.
DisplacementField expand(const LinearSystem& system, const Eigen::VectorXd& u_free);

DisplacementField solve(const LinearSystem& system, const SolverOptions& options = {});

struct Stress {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
  double zz = 0.0;
};

using GaussStresses = std::vector<std::array<Stress, 7>>;

/// Stress at the kGauss7 points of every element.
GaussStresses stress_at_gauss_points(const Mesh& mesh, const Material& material, const DisplacementField& u);

/// Stress at reference coordinates (xi, eta) of element e.
Stress stress_at(const Mesh& mesh, const Material& material, const DisplacementField& u, int e, double xi,
                 double eta);

}  // namespace wingcrack
