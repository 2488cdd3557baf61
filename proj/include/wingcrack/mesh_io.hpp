#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wingcrack/mesh.hpp"

namespace wingcrack {

/// Optional per-node and per-element data attached to a VTK snapshot.
struct VtkFields {
  std::vector<std::pair<std::string, std::vector<double>>> cell_scalars;
  std::vector<std::pair<std::string, std::vector<double>>> point_scalars;
  std::vector<std::pair<std::string, std::vector<Vec2>>> point_vectors;
};

/// Legacy ASCII unstructured grid with quadratic triangles (cell type 22).
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields = {});
void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields = {});

/// Plain-text listing:
///
///   wingcrack-mesh 1
///   nodes <N>
///   <x> <y> <kind>            (N lines; kind is the NodeKind integer)
///   elements <E>
///   <n0> <n1> <n2> <n3> <n4> <n5>   (E lines; corners then midsides of (0,1) (1,2) (2,0))
///   boundary_edges <B>
///   <a> <mid> <b> <domain_edge>
///   face_pairs <F>
///   <fracture> <a+> <mid+> <b+> <a-> <mid-> <b->
///
/// Node and element ids are zero-based line positions within their section.
void write_mesh_text(std::ostream& out, const Mesh& mesh);
/// Reads the listing above; geometry, stations and tip data are left empty.
Mesh read_mesh_text(std::istream& in);

}  // namespace wingcrack
