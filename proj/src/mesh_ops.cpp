#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "wingcrack/error.hpp"
#include "wingcrack/mesh.hpp"
#include "wingcrack/p2.hpp"

namespace wingcrack {

namespace {

double corner_area(const Mesh& m, const Element& e) {
  const Point a = m.nodes[static_cast<std::size_t>(e.nodes[0])];
  const Point b = m.nodes[static_cast<std::size_t>(e.nodes[1])];
  const Point c = m.nodes[static_cast<std::size_t>(e.nodes[2])];
  return 0.5 * cross(b - a, c - a);
}

double element_min_angle(const Mesh& m, const Element& e) {
  return min_angle_deg(m.nodes[static_cast<std::size_t>(e.nodes[0])], m.nodes[static_cast<std::size_t>(e.nodes[1])],
                       m.nodes[static_cast<std::size_t>(e.nodes[2])]);
}

std::map<TipRef, RosetteSpec> current_rosettes(const Mesh& mesh) {
  std::map<TipRef, RosetteSpec> out;
  for (const TipRosette& t : mesh.tips) out[t.tip] = {t.radius, t.sectors};
  return out;
}

}  // namespace

std::vector<bool> rosette_zone_elements(const Mesh& mesh) {
  std::vector<bool> zone(mesh.elements.size(), false);
  for (const TipRosette& t : mesh.tips) {
    const Point c = mesh.nodes[static_cast<std::size_t>(t.node)];
    const double reach = 2.0 * t.radius * (1.0 + 1e-9);
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      for (int k = 0; k < 3; ++k) {
        if (distance(mesh.nodes[static_cast<std::size_t>(mesh.elements[e].nodes[static_cast<std::size_t>(k)])], c) <= reach) zone[e] = true;
      }
    }
  }
  return zone;
}

Mesh laplacian_smooth(const Mesh& input, int n_iterations) {
  Mesh mesh = input;
  if (n_iterations <= 0) return mesh;
  const std::size_t n = mesh.nodes.size();
  std::vector<std::set<int>> neighbours(n);
  std::vector<std::vector<int>> incident(n);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& v = mesh.elements[e].nodes;
    for (int k = 0; k < 3; ++k) {
      const int a = v[static_cast<std::size_t>(k)];
      const int b = v[static_cast<std::size_t>((k + 1) % 3)];
      neighbours[static_cast<std::size_t>(a)].insert(b);
      neighbours[static_cast<std::size_t>(b)].insert(a);
      incident[static_cast<std::size_t>(a)].push_back(static_cast<int>(e));
    }
  }
  auto local_quality = [&](int node) {
    double q = 180.0;
    for (int e : incident[static_cast<std::size_t>(node)]) {
      const Element& el = mesh.elements[static_cast<std::size_t>(e)];
      if (corner_area(mesh, el) <= 0.0) return -1.0;
      q = std::min(q, element_min_angle(mesh, el));
    }
    return q;
  };

  for (int it = 0; it < n_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (mesh.kinds[i] != NodeKind::Interior || neighbours[i].empty()) continue;
      Point centroid{0, 0};
      for (int j : neighbours[i]) centroid = centroid + mesh.nodes[static_cast<std::size_t>(j)];
      centroid = centroid / static_cast<double>(neighbours[i].size());
      const Point old = mesh.nodes[i];
      if (centroid == old) continue;
      const double before = local_quality(static_cast<int>(i));
      mesh.nodes[i] = centroid;
      const double after = local_quality(static_cast<int>(i));
      if (after <= 0.0 || after < before) mesh.nodes[i] = old;
    }
  }
  for (Element& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      const auto m = static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(3 + k)]);
      if (mesh.kinds[m] == NodeKind::QuarterPoint) continue;
      mesh.nodes[m] = 0.5 * (mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(k)])] +
                             mesh.nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>((k + 1) % 3)])]);
    }
  }
  return mesh;
}

Mesh refine(const Mesh& mesh, std::span<const int> marked) {
  if (marked.empty()) return mesh;
  RemeshRequest req;
  req.seeds = corner_positions(mesh);
  req.rosettes = current_rosettes(mesh);
  const double floor = mesh.options.min_size();
  std::vector<char> in_rosette(mesh.elements.size(), 0);
  for (const TipRosette& t : mesh.tips)
    for (int e : t.elements) in_rosette[static_cast<std::size_t>(e)] = 1;
  for (int e : marked) {
    if (e < 0 || static_cast<std::size_t>(e) >= mesh.elements.size()) throw MeshError("marked element id out of range");
  }
  std::set<TipRef> shrink;
  for (int e : marked) {
    const auto ue = static_cast<std::size_t>(e);
    if (in_rosette[ue]) {
      for (const TipRosette& t : mesh.tips)
        if (std::find(t.elements.begin(), t.elements.end(), e) != t.elements.end()) shrink.insert(t.tip);
      continue;
    }
    const auto& v = mesh.elements[ue].nodes;
    for (int k = 0; k < 3; ++k) {
      const Point a = mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(k)])];
      const Point b = mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>((k + 1) % 3)])];
      if (0.5 * distance(a, b) < floor) throw MeshError("refinement below the minimum element size");
      req.seeds.push_back(0.5 * (a + b));
    }
  }
  for (TipRef t : shrink) {
    RosetteSpec& spec = req.rosettes[t];
    spec.radius *= 0.5;
    if (spec.radius < floor) throw MeshError("refinement below the minimum element size");
  }
  return build_mesh(mesh.geometry, mesh.options, req);
}

Mesh insert_tip_rosette(const Mesh& mesh, TipRef tip, double rosette_radius, int n_sectors) {
  if (tip.fracture < 0 || static_cast<std::size_t>(tip.fracture) >= mesh.geometry.fractures.size() ||
      !mesh.geometry.fractures[static_cast<std::size_t>(tip.fracture)].tip_active(tip.end))
    throw GeometryError("tip " + to_string(tip) + " is not an active fracture tip");
  if (!(rosette_radius > 0.0)) throw GeometryError("rosette radius must be positive");
  RemeshRequest req;
  req.seeds = corner_positions(mesh);
  req.rosettes = current_rosettes(mesh);
  req.rosettes[tip] = {rosette_radius, n_sectors};
  req.clamp_rosettes = false;
  return build_mesh(mesh.geometry, mesh.options, req);
}

std::vector<ElementQuality> mesh_quality(const Mesh& mesh) {
  const auto zone = rosette_zone_elements(mesh);
  std::vector<ElementQuality> out;
  out.reserve(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto x = mesh.element_points(static_cast<int>(e));
    double jmin = std::numeric_limits<double>::infinity();
    for (const auto& q : p2::kGauss7) jmin = std::min(jmin, p2::jacobian(x, q.xi, q.eta).det());
    out.push_back({static_cast<int>(e), element_min_angle(mesh, mesh.elements[e]), jmin, zone[e]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ElementQuality& a, const ElementQuality& b) { return a.min_angle_deg < b.min_angle_deg; });
  return out;
}

double min_quality_angle(const Mesh& mesh) {
  double m = 180.0;
  for (const ElementQuality& q : mesh_quality(mesh))
    if (!q.in_rosette) m = std::min(m, q.min_angle_deg);
  return m;
}

std::vector<std::string> check_invariants(const Mesh& mesh) {
  std::vector<std::string> issues;
  auto report = [&](const std::string& s) {
    if (issues.size() < 50) issues.push_back(s);
  };
  double scale = 0.0;
  for (const Point& p : mesh.nodes) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double tol = 1e-12 * std::max(scale, 1.0);

  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto x = mesh.element_points(static_cast<int>(e));
    for (const auto& q : p2::kGauss7) {
      if (!(p2::jacobian(x, q.xi, q.eta).det() > 0.0)) {
        report("element " + std::to_string(e) + " has a non-positive Jacobian");
        break;
      }
    }
  }

  // Edge conformity over corner edges.
  std::map<std::pair<int, int>, int> edge_count;
  for (const Element& el : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      int a = el.nodes[static_cast<std::size_t>(k)], b = el.nodes[static_cast<std::size_t>((k + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  std::set<std::pair<int, int>> open_edges;
  for (const BoundaryEdge& be : mesh.boundary_edges)
    open_edges.insert({std::min(be.nodes[0], be.nodes[2]), std::max(be.nodes[0], be.nodes[2])});
  for (const FacePair& fp : mesh.fracture_face_pairs) {
    open_edges.insert({std::min(fp.plus[0], fp.plus[2]), std::max(fp.plus[0], fp.plus[2])});
    open_edges.insert({std::min(fp.minus[0], fp.minus[2]), std::max(fp.minus[0], fp.minus[2])});
  }
  for (const auto& [edge, count] : edge_count) {
    const bool open = open_edges.count(edge) > 0;
    if (count > 2 || (open && count != 1) || (!open && count != 2))
      report("edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) + ") shared by " +
             std::to_string(count) + " elements");
  }
  for (const auto& edge : open_edges)
    if (!edge_count.count(edge)) report("listed boundary/face edge is not an element edge");

  // Face pairs coincide in the reference configuration and are distinct away from merge points.
  for (const FacePair& fp : mesh.fracture_face_pairs) {
    for (int k = 0; k < 3; ++k) {
      if (distance(mesh.nodes[static_cast<std::size_t>(fp.plus[static_cast<std::size_t>(k)])],
                   mesh.nodes[static_cast<std::size_t>(fp.minus[static_cast<std::size_t>(k)])]) > tol)
        report("face pair nodes do not coincide");
    }
    if (fp.plus[1] == fp.minus[1]) report("face pair shares its midside node");
  }
  for (std::size_t f = 0; f < mesh.stations.size(); ++f) {
    std::size_t pairs = 0;
    for (const FacePair& fp : mesh.fracture_face_pairs) pairs += fp.fracture == static_cast<int>(f);
    if (mesh.stations[f].size() != 2 * pairs + 1) report("fracture " + std::to_string(f) + " station count mismatch");
    for (std::size_t i = 1; i + 1 < mesh.stations[f].size(); ++i) {
      const FaceStation& s = mesh.stations[f][i];
      if (s.plus == s.minus && !s.junction) report("interior fracture node of fracture " + std::to_string(f) + " is not duplicated");
    }
  }

  for (const TipRosette& t : mesh.tips) {
    const Point tp = mesh.nodes[static_cast<std::size_t>(t.node)];
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      if (static_cast<int>(i) != t.node && distance(mesh.nodes[i], tp) <= tol)
        report("tip node " + std::to_string(t.node) + " is duplicated");
    }
    if (static_cast<int>(t.elements.size()) != t.sectors)
      report("tip " + to_string(t.tip) + " has " + std::to_string(t.elements.size()) + " rosette elements, expected " +
             std::to_string(t.sectors));
    for (int e : t.elements) {
      const auto& v = mesh.elements[static_cast<std::size_t>(e)].nodes;
      for (int k = 0; k < 3; ++k) {
        const int a = v[static_cast<std::size_t>(k)], b = v[static_cast<std::size_t>((k + 1) % 3)];
        if (a != t.node && b != t.node) continue;
        const int other = a == t.node ? b : a;
        const Point mid = mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(3 + k)])];
        const double ratio = distance(mid, tp) / distance(mesh.nodes[static_cast<std::size_t>(other)], tp);
        if (std::abs(ratio - 0.25) > 1e-12) {
          std::ostringstream os;
          os << "quarter-point ratio " << ratio << " in element " << e;
          report(os.str());
        }
      }
    }
  }
  return issues;
}

}  // namespace wingcrack
