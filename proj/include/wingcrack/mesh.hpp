#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wingcrack/geometry.hpp"

namespace wingcrack {

/// A = first polyline vertex, B = last polyline vertex.
enum class TipEnd : std::uint8_t { A, B };

struct TipRef {
  int fracture = 0;
  TipEnd end = TipEnd::B;
  auto operator<=>(const TipRef&) const = default;
};

std::string to_string(TipRef tip);

struct FracturePolyline {
  std::string name;
  std::vector<Point> vertices;
  bool tip_a_active = true;
  bool tip_b_active = true;
  double friction_mu = 0.0;
  double cohesion_c = 0.0;

  bool tip_active(TipEnd end) const { return end == TipEnd::A ? tip_a_active : tip_b_active; }
  void set_tip_active(TipEnd end, bool active) { (end == TipEnd::A ? tip_a_active : tip_b_active) = active; }
  Point tip(TipEnd end) const { return end == TipEnd::A ? vertices.front() : vertices.back(); }
  /// Vertex before the tip along the polyline.
  Point behind_tip(TipEnd end) const {
    return end == TipEnd::A ? vertices[1] : vertices[vertices.size() - 2];
  }
  /// Unit direction of the last segment, pointing out of the crack at the tip.
  Vec2 tip_tangent(TipEnd end) const { return normalized(tip(end) - behind_tip(end)); }

  bool operator==(const FracturePolyline&) const = default;
};

struct Domain {
  std::vector<Point> polygon;
  /// Edge i joins polygon[i] and polygon[(i + 1) % n].
  std::vector<std::string> edge_labels;
  std::vector<std::string> vertex_labels;

  bool operator==(const Domain&) const = default;
};

struct Geometry {
  Domain domain;
  std::vector<FracturePolyline> fractures;

  std::vector<TipRef> active_tips() const;
  bool operator==(const Geometry&) const = default;
};

/// Checks the domain polygon, fracture polylines and their mutual position; throws GeometryError.
void validate_geometry(const Geometry& geometry);

/// Returns a copy with a counterclockwise polygon (labels reordered to follow their edges).
Geometry normalized_geometry(Geometry geometry);

struct SizeField {
  double h_tip = 0.1;
  double h_max = 1.0;
  double grading = 0.3;

  /// Target size at distance r from the nearest active tip.
  double at_distance(double r) const { return std::min(h_tip + grading * r, h_max); }
  bool operator==(const SizeField&) const = default;
};

struct MeshOptions {
  SizeField size;
  int rosette_sectors = 8;
  /// Default rosette radius as a multiple of h_tip.
  double rosette_factor = 0.5;
  double min_angle_deg = 20.0;
  /// Size floor as a multiple of h_tip; segments and elements are never split below it.
  double min_size_factor = 1.0 / 64.0;
  std::size_t max_elements = 400000;
  int smoothing_iterations = 3;

  double min_size() const { return size.h_tip * min_size_factor; }
  bool operator==(const MeshOptions&) const = default;
};

/// Rosette corners live inside this many rosette radii of the tip; other features must stay outside.
inline constexpr double kRosetteClearance = 2.6;

enum class NodeKind : std::uint8_t { Interior, Boundary, Fracture, Tip, Rosette, Midside, QuarterPoint };

/// 6-node triangle: counterclockwise corners 0..2, then midsides of edges (0,1), (1,2), (2,0).
struct Element {
  std::array<int, 6> nodes{};
};

/// Quadratic boundary edge (corner, midside, corner) with the domain on its left.
struct BoundaryEdge {
  std::array<int, 3> nodes{};
  int domain_edge = 0;
};

/// Matched edges of the two faces of a fracture segment, both listed in polyline direction.
/// The plus face lies to the left of the polyline.
struct FacePair {
  int fracture = 0;
  std::array<int, 3> plus{};
  std::array<int, 3> minus{};
};

/// Node pair at one position along a fracture (corner or midside). plus == minus where faces merge.
struct FaceStation {
  int plus = -1;
  int minus = -1;
  bool corner = true;
  bool junction = false;
  double arc = 0.0;
};

struct TipRosette {
  TipRef tip;
  int node = -1;
  double radius = 0.0;
  int sectors = 0;
  std::vector<int> elements;
};

struct Mesh {
  std::vector<Point> nodes;
  std::vector<NodeKind> kinds;
  std::vector<Element> elements;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<FacePair> fracture_face_pairs;
  /// Per fracture, stations ordered from the first to the last polyline vertex.
  std::vector<std::vector<FaceStation>> stations;
  std::vector<TipRosette> tips;
  std::vector<int> quarter_point_elements;
  /// Node at each domain polygon vertex.
  std::vector<int> domain_vertex_nodes;

  Geometry geometry;
  MeshOptions options;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return elements.size(); }
  const TipRosette* find_tip(TipRef tip) const;
  std::array<Point, 6> element_points(int e) const;
};

struct RosetteSpec {
  double radius = 0.0;
  int sectors = 8;
};

/// Inputs for a (re)build that reuses vertices of an earlier mesh.
struct RemeshRequest {
  std::vector<Point> seeds;
  std::map<TipRef, RosetteSpec> rosettes;
  /// When false, explicit rosette radii that violate clearance raise GeometryError instead of shrinking.
  bool clamp_rosettes = true;
};

/// Conforming quadratic mesh of the domain with duplicated fracture faces, tip rosettes and smoothing.
Mesh triangulate(const Geometry& geometry, const MeshOptions& options);

Mesh build_mesh(const Geometry& geometry, const MeshOptions& options, const RemeshRequest& request);

/// Distinct corner positions (duplicated face nodes collapse to one).
std::vector<Point> corner_positions(const Mesh& mesh);

Mesh insert_tip_rosette(const Mesh& mesh, TipRef tip, double rosette_radius, int n_sectors);

Mesh laplacian_smooth(const Mesh& mesh, int n_iterations);

/// Subdivides the marked elements; rosette elements shrink their rosette instead.
Mesh refine(const Mesh& mesh, std::span<const int> marked);

struct ElementQuality {
  int element = 0;
  double min_angle_deg = 0.0;
  double min_jacobian = 0.0;
  bool in_rosette = false;
};

/// Per-element quality sorted by ascending min angle.
std::vector<ElementQuality> mesh_quality(const Mesh& mesh);

/// Smallest corner angle over elements outside tip rosettes and their transition ring.
double min_quality_angle(const Mesh& mesh);

/// Human-readable list of violated mesh invariants; empty when the mesh is valid.
std::vector<std::string> check_invariants(const Mesh& mesh);

/// True if the element lies in a tip rosette or its transition ring.
std::vector<bool> rosette_zone_elements(const Mesh& mesh);

}  // namespace wingcrack
