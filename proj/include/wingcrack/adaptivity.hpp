#pragma once

#include <span>
#include <vector>

#include "wingcrack/fem.hpp"
#include "wingcrack/mesh.hpp"

namespace wingcrack {

struct ErrorField {
  std::vector<double> eta_e;
  double eta = 0.0;
  /// sqrt of the energy of the recovered stress.
  double recovered_norm = 0.0;
  double relative() const { return recovered_norm > 0.0 ? eta / recovered_norm : 0.0; }
};

/// Continuous nodal stress: area-weighted average of per-element linear least-squares fits of the
/// Gauss-point stresses. Duplicated face nodes only see their own side.
std::vector<Stress> recover_stress(const Mesh& mesh, const GaussStresses& sigma_h);

/// Element energy norm of (recovered - raw) stress.
ErrorField zz_error(const Mesh& mesh, const Material& material, const GaussStresses& sigma_h,
                    const std::vector<Stress>& sigma_star);

/// Doerfler marking: smallest set holding theta^2 of the squared error, largest first, ties by id.
std::vector<int> mark_elements(const ErrorField& err, double theta = 0.5);

struct GrownTip {
  TipRef tip;
  Point from;
  Point to;
};

/// Rebuilds the mesh for updated geometry, keeping the old vertices except those within
/// cavity_factor * da of a new segment. Unchanged tips keep their rosettes.
Mesh remesh_after_growth(const Mesh& mesh, const Geometry& geometry, std::span<const GrownTip> grown,
                         const SizeField& size, double cavity_factor = 3.0);

}  // namespace wingcrack
