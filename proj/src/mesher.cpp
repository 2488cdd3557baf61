#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wingcrack/detail/predicates.hpp"
#include "wingcrack/detail/triangulation.hpp"
#include "wingcrack/error.hpp"
#include "wingcrack/mesh.hpp"

namespace wingcrack {

using detail::Triangulation;

std::string to_string(TipRef tip) {
  return std::to_string(tip.fracture) + (tip.end == TipEnd::A ? "A" : "B");
}

std::vector<TipRef> Geometry::active_tips() const {
  std::vector<TipRef> tips;
  for (std::size_t f = 0; f < fractures.size(); ++f) {
    for (TipEnd end : {TipEnd::A, TipEnd::B}) {
      if (fractures[f].tip_active(end)) tips.push_back({static_cast<int>(f), end});
    }
  }
  return tips;
}

const TipRosette* Mesh::find_tip(TipRef tip) const {
  for (const TipRosette& t : tips)
    if (t.tip == tip) return &t;
  return nullptr;
}

std::array<Point, 6> Mesh::element_points(int e) const {
  std::array<Point, 6> x;
  const Element& el = elements[static_cast<std::size_t>(e)];
  for (int i = 0; i < 6; ++i) x[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(el.nodes[static_cast<std::size_t>(i)])];
  return x;
}

namespace {

double geometry_scale(const Geometry& g) {
  Point lo = g.domain.polygon.front(), hi = lo;
  for (const Point& p : g.domain.polygon) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  return std::max(distance(lo, hi), 1e-300);
}

bool on_domain_boundary(Point p, const Domain& d, double eps) {
  const std::size_t n = d.polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, d.polygon[i], d.polygon[(i + 1) % n]) <= eps) return true;
  }
  return false;
}

// Strict crossing: each segment has endpoints strictly on both sides of the other.
bool proper_crossing(Point a, Point b, Point c, Point d) {
  const double o1 = detail::orient2d(a, b, c), o2 = detail::orient2d(a, b, d);
  const double o3 = detail::orient2d(c, d, a), o4 = detail::orient2d(c, d, b);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

bool collinear_overlap(Point a, Point b, Point c, Point d) {
  if (detail::orient2d(a, b, c) != 0.0 || detail::orient2d(a, b, d) != 0.0) return false;
  const Vec2 u = b - a;
  const double len2 = dot(u, u);
  double t0 = dot(c - a, u) / len2, t1 = dot(d - a, u) / len2;
  if (t0 > t1) std::swap(t0, t1);
  return std::min(1.0, t1) - std::max(0.0, t0) > 1e-12;
}

}  // namespace

Geometry normalized_geometry(Geometry g) {
  Domain& d = g.domain;
  const std::size_t n = d.polygon.size();
  if (d.edge_labels.size() < n) {
    for (std::size_t i = d.edge_labels.size(); i < n; ++i) d.edge_labels.push_back("edge" + std::to_string(i));
  }
  if (d.vertex_labels.size() < n) {
    for (std::size_t i = d.vertex_labels.size(); i < n; ++i) d.vertex_labels.push_back("v" + std::to_string(i));
  }
  if (n >= 3 && signed_area(d.polygon) < 0.0) {
    // reversed edge i runs from old vertex (n-1-i) ... reindex so edge i keeps its label
    std::vector<Point> poly(n);
    std::vector<std::string> elab(n), vlab(n);
    for (std::size_t i = 0; i < n; ++i) {
      poly[i] = d.polygon[(n - i) % n];
      vlab[i] = d.vertex_labels[(n - i) % n];
    }
    for (std::size_t i = 0; i < n; ++i) {
      // new edge i joins old vertices (n-i)%n and (n-i-1)%n, which was old edge (n-i-1)%n
      elab[i] = d.edge_labels[(2 * n - i - 1) % n];
    }
    d.polygon = std::move(poly);
    d.edge_labels = std::move(elab);
    d.vertex_labels = std::move(vlab);
  }
  return g;
}

void validate_geometry(const Geometry& g) {
  const Domain& d = g.domain;
  if (d.polygon.size() < 3) throw GeometryError("domain polygon needs at least 3 vertices");
  for (const Point& p : d.polygon)
    if (!is_finite(p)) throw GeometryError("domain polygon has a non-finite coordinate");
  if (!polygon_is_simple(d.polygon)) throw GeometryError("domain polygon is not simple");
  const double eps = 1e-10 * geometry_scale(g);
  const std::size_t n = d.polygon.size();

  for (std::size_t f = 0; f < g.fractures.size(); ++f) {
    const FracturePolyline& fr = g.fractures[f];
    const std::string name = "fracture '" + fr.name + "'";
    if (fr.vertices.size() < 2) throw GeometryError(name + " needs at least 2 vertices");
    if (fr.friction_mu < 0.0 || fr.cohesion_c < 0.0)
      throw GeometryError(name + " has negative friction or cohesion");
    for (std::size_t i = 0; i < fr.vertices.size(); ++i) {
      if (!is_finite(fr.vertices[i])) throw GeometryError(name + " has a non-finite coordinate");
      if (i > 0 && distance(fr.vertices[i], fr.vertices[i - 1]) <= eps)
        throw GeometryError(name + " has repeated consecutive vertices");
      const bool on_boundary = on_domain_boundary(fr.vertices[i], d, eps);
      if (!on_boundary && !point_in_polygon(fr.vertices[i], d.polygon))
        throw GeometryError(name + " leaves the domain");
      const bool is_end = (i == 0 || i + 1 == fr.vertices.size());
      if (on_boundary && !is_end) throw GeometryError(name + " touches the domain boundary at an interior vertex");
      if (on_boundary && is_end && fr.tip_active(i == 0 ? TipEnd::A : TipEnd::B))
        throw GeometryError(name + " has an active tip on the domain boundary");
    }
    if (polyline_self_intersects(fr.vertices)) throw GeometryError(name + " is self-intersecting");
    for (std::size_t i = 0; i + 1 < fr.vertices.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (proper_crossing(fr.vertices[i], fr.vertices[i + 1], d.polygon[k], d.polygon[(k + 1) % n]))
          throw GeometryError(name + " crosses the domain boundary");
      }
    }
  }
  for (std::size_t f = 0; f < g.fractures.size(); ++f) {
    for (std::size_t h = f + 1; h < g.fractures.size(); ++h) {
      const auto& a = g.fractures[f].vertices;
      const auto& b = g.fractures[h].vertices;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
          if (proper_crossing(a[i], a[i + 1], b[j], b[j + 1]) || collinear_overlap(a[i], a[i + 1], b[j], b[j + 1]))
            throw GeometryError("fractures '" + g.fractures[f].name + "' and '" + g.fractures[h].name + "' cross");
        }
      }
    }
  }
  // an active tip may not sit on another fracture
  for (std::size_t f = 0; f < g.fractures.size(); ++f) {
    for (TipEnd end : {TipEnd::A, TipEnd::B}) {
      if (!g.fractures[f].tip_active(end)) continue;
      const Point t = g.fractures[f].tip(end);
      for (std::size_t h = 0; h < g.fractures.size(); ++h) {
        if (h == f) continue;
        const auto& b = g.fractures[h].vertices;
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
          if (point_segment_distance(t, b[j], b[j + 1]) <= eps)
            throw GeometryError("active tip of '" + g.fractures[f].name + "' lies on another fracture");
        }
      }
    }
  }
}

namespace {

struct ActiveRosette {
  TipRef tip;
  Point center;
  Vec2 tangent;
  double radius;
  int sectors;
};

// Distance from a tip to every feature except the last segment of its own fracture.
double tip_feature_distance(const Geometry& g, TipRef tip) {
  const FracturePolyline& fr = g.fractures[static_cast<std::size_t>(tip.fracture)];
  const Point t = fr.tip(tip.end);
  double dist = std::numeric_limits<double>::infinity();
  const auto& poly = g.domain.polygon;
  for (std::size_t k = 0; k < poly.size(); ++k)
    dist = std::min(dist, point_segment_distance(t, poly[k], poly[(k + 1) % poly.size()]));
  for (std::size_t h = 0; h < g.fractures.size(); ++h) {
    const auto& v = g.fractures[h].vertices;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
      if (static_cast<int>(h) == tip.fracture) {
        const bool last = (tip.end == TipEnd::A) ? (j == 0) : (j + 2 == v.size());
        if (last) continue;
      }
      dist = std::min(dist, point_segment_distance(t, v[j], v[j + 1]));
    }
  }
  return dist;
}

struct SubSeg {
  int a = -1;
  int b = -1;
  bool boundary = false;
  int owner = 0;  // domain edge or fracture index
  int piece = 0;  // segment index within a fracture polyline
  bool fixed = false;
};

class Mesher {
 public:
  Mesher(const Geometry& g, const MeshOptions& opt, const RemeshRequest& req)
      : g_(g), opt_(opt), req_(req), scale_(geometry_scale(g)), eps_(1e-10 * scale_),
        tri_(bbox_lo(g), bbox_hi(g)) {}

  Mesh run();

 private:
  static Point bbox_lo(const Geometry& g) {
    Point lo = g.domain.polygon.front();
    for (const Point& p : g.domain.polygon) lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    return lo;
  }
  static Point bbox_hi(const Geometry& g) {
    Point hi = g.domain.polygon.front();
    for (const Point& p : g.domain.polygon) hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    return hi;
  }

  double size_at(Point p) const {
    double r = std::numeric_limits<double>::infinity();
    for (const ActiveRosette& t : rosettes_) r = std::min(r, distance(p, t.center));
    if (rosettes_.empty()) return opt_.size.h_max;
    return opt_.size.at_distance(r);
  }

  bool in_protected(Point p, double factor) const {
    for (const ActiveRosette& t : rosettes_)
      if (distance(p, t.center) < factor * t.radius) return true;
    return false;
  }

  void setup_rosettes();
  void build_segments();
  int add_vertex(Point p);
  void split_subsegment(std::size_t s);
  void refine();
  std::vector<char> classify_inside() const;
  void check_budget() const;
  Mesh assemble_mesh();

  const Geometry& g_;
  const MeshOptions& opt_;
  const RemeshRequest& req_;
  double scale_;
  double eps_;
  Triangulation tri_;

  std::vector<ActiveRosette> rosettes_;
  std::vector<SubSeg> subs_;
  std::vector<char> rosette_vertex_;  // by triangulation vertex id
  std::unordered_set<int> tip_vertices_;
  std::map<TipRef, int> tip_vertex_of_;
};

void Mesher::setup_rosettes() {
  for (TipRef tip : g_.active_tips()) {
    const FracturePolyline& fr = g_.fractures[static_cast<std::size_t>(tip.fracture)];
    const double feature = tip_feature_distance(g_, tip);
    const double last = distance(fr.tip(tip.end), fr.behind_tip(tip.end));
    const double limit = std::min(feature, last) / kRosetteClearance;
    double radius = opt_.rosette_factor * opt_.size.h_tip;
    int sectors = opt_.rosette_sectors;
    if (auto it = req_.rosettes.find(tip); it != req_.rosettes.end()) {
      radius = it->second.radius;
      sectors = it->second.sectors;
      if (!req_.clamp_rosettes && radius > limit * (1.0 + 1e-12))
        throw GeometryError("rosette at tip " + to_string(tip) + " would intersect another fracture or the boundary");
    }
    if (sectors < 4 || sectors > 64) throw GeometryError("rosette sector count must be in [4, 64]");
    radius = std::min(radius, limit);
    if (!(radius > 0.0)) throw GeometryError("no room for a rosette at tip " + to_string(tip));
    rosettes_.push_back({tip, fr.tip(tip.end), fr.tip_tangent(tip.end), radius, sectors});
  }
}

int Mesher::add_vertex(Point p) {
  const int id = tri_.insert(p);
  if (static_cast<std::size_t>(id) >= rosette_vertex_.size()) rosette_vertex_.resize(static_cast<std::size_t>(id) + 1, 0);
  return id;
}

void Mesher::check_budget() const {
  if (tri_.alive_count() > 2 * opt_.max_elements + 64)
    throw MeshError("size field produces more than " + std::to_string(opt_.max_elements) + " elements");
}

void Mesher::build_segments() {
  struct Raw {
    Point a, b;
    bool boundary;
    int owner, piece;
    std::vector<std::pair<double, Point>> pts;
    std::vector<double> fixed_params;                    // rosette crack points and tips
    std::vector<std::pair<double, double>> fixed_pairs;  // pieces inside a rosette
  };
  std::vector<Raw> raws;
  const auto& poly = g_.domain.polygon;
  for (std::size_t k = 0; k < poly.size(); ++k)
    raws.push_back({poly[k], poly[(k + 1) % poly.size()], true, static_cast<int>(k), 0, {}, {}, {}});
  for (std::size_t f = 0; f < g_.fractures.size(); ++f) {
    const auto& v = g_.fractures[f].vertices;
    for (std::size_t j = 0; j + 1 < v.size(); ++j)
      raws.push_back({v[j], v[j + 1], false, static_cast<int>(f), static_cast<int>(j), {}, {}, {}});
  }

  auto on_raw = [&](const Raw& r, Point p, double& t) {
    if (point_segment_distance(p, r.a, r.b) > eps_) return false;
    t = project_to_segment(p, r.a, r.b);
    return true;
  };

  // Fracture vertices lying on other segments (ends on the boundary, T-junctions).
  std::vector<Point> special;
  for (const auto& fr : g_.fractures)
    for (const Point& p : fr.vertices) special.push_back(p);

  for (Raw& r : raws) {
    r.pts.push_back({0.0, r.a});
    r.pts.push_back({1.0, r.b});
    for (const Point& p : special) {
      double t;
      if (p == r.a || p == r.b) continue;
      if (on_raw(r, p, t)) r.pts.push_back({t, p});
    }
  }

  // Rosette crack-face points at r and 2r behind each tip.
  for (const ActiveRosette& ro : rosettes_) {
    const FracturePolyline& fr = g_.fractures[static_cast<std::size_t>(ro.tip.fracture)];
    const int piece = ro.tip.end == TipEnd::A ? 0 : static_cast<int>(fr.vertices.size()) - 2;
    for (Raw& r : raws) {
      if (r.boundary || r.owner != ro.tip.fracture || r.piece != piece) continue;
      const double len = distance(r.a, r.b);
      const bool tip_at_b = ro.tip.end == TipEnd::B;
      const double t0 = tip_at_b ? 1.0 : 0.0;
      const double t1 = tip_at_b ? 1.0 - ro.radius / len : ro.radius / len;
      const double t2 = tip_at_b ? 1.0 - 2.0 * ro.radius / len : 2.0 * ro.radius / len;
      for (double t : {t1, t2}) r.pts.push_back({t, r.a + t * (r.b - r.a)});
      r.fixed_params.insert(r.fixed_params.end(), {t0, t1, t2});
      r.fixed_pairs.push_back({std::min(t0, t1), std::max(t0, t1)});
      r.fixed_pairs.push_back({std::min(t1, t2), std::max(t1, t2)});
    }
  }

  // Retained vertices of an earlier mesh.
  std::vector<Point> interior_seeds;
  for (const Point& p : req_.seeds) {
    if (in_protected(p, 2.5)) continue;
    bool on_segment = false;
    double near = std::numeric_limits<double>::infinity();
    for (Raw& r : raws) {
      double t;
      if (on_raw(r, p, t)) {
        on_segment = true;
        if (t > 0.0 && t < 1.0) r.pts.push_back({t, p});
        break;
      }
      near = std::min(near, point_segment_distance(p, r.a, r.b));
    }
    if (on_segment) continue;
    if (!point_in_polygon(p, poly)) continue;
    if (near < 0.3 * size_at(p)) continue;
    interior_seeds.push_back(p);
  }

  // Sort, deduplicate, then subdivide each piece to the local size.
  struct PendingSub {
    Point a, b;
    bool boundary;
    int owner, piece;
    bool fixed;
  };
  std::vector<PendingSub> pending;
  const double floor = opt_.min_size();
  for (Raw& r : raws) {
    std::sort(r.pts.begin(), r.pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<double, Point>> uniq;
    const double len = distance(r.a, r.b);
    for (const auto& q : r.pts) {
      if (!uniq.empty() && (q.first - uniq.back().first) * len <= eps_) {
        // keep endpoints and fixed rosette points exactly
        const bool keep_new = (q.first == 1.0) ||
                              std::find(r.fixed_params.begin(), r.fixed_params.end(), q.first) != r.fixed_params.end();
        if (keep_new) uniq.back() = q;
        continue;
      }
      uniq.push_back(q);
    }
    auto is_fixed_piece = [&](double t0, double t1) {
      return std::any_of(r.fixed_pairs.begin(), r.fixed_pairs.end(), [&](const auto& fp) {
        return std::abs(fp.first - t0) * len <= eps_ && std::abs(fp.second - t1) * len <= eps_;
      });
    };
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
      const bool fixed = !r.boundary && is_fixed_piece(uniq[i].first, uniq[i + 1].first);
      if (fixed) {
        pending.push_back({uniq[i].second, uniq[i + 1].second, r.boundary, r.owner, r.piece, true});
        continue;
      }
      // recursive midpoint subdivision to the size field
      std::vector<std::pair<Point, Point>> stack{{uniq[i].second, uniq[i + 1].second}};
      std::vector<std::pair<Point, Point>> out;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const double l = distance(a, b);
        const Point m = 0.5 * (a + b);
        if (l > size_at(m) && l > 2.0 * floor) {
          stack.push_back({m, b});
          stack.push_back({a, m});
        } else {
          out.push_back({a, b});
        }
      }
      for (auto& [a, b] : out) pending.push_back({a, b, r.boundary, r.owner, r.piece, false});
    }
  }

  // Rosette ring points.
  std::vector<Point> ring_points;
  for (const ActiveRosette& ro : rosettes_) {
    const double base = std::atan2(-ro.tangent.y, -ro.tangent.x);
    for (int k = 1; k < ro.sectors; ++k) {
      const double a = base + 2.0 * std::numbers::pi * k / ro.sectors;
      ring_points.push_back(ro.center + ro.radius * Vec2{std::cos(a), std::sin(a)});
    }
    for (int k = 1; k < 2 * ro.sectors; ++k) {
      const double a = base + std::numbers::pi * k / ro.sectors;
      ring_points.push_back(ro.center + 2.0 * ro.radius * Vec2{std::cos(a), std::sin(a)});
    }
  }

  // Insert in a spatially coherent order.
  std::vector<Point> all;
  for (const auto& s : pending) {
    all.push_back(s.a);
    all.push_back(s.b);
  }
  const std::size_t n_segment_points = all.size();
  all.insert(all.end(), ring_points.begin(), ring_points.end());
  all.insert(all.end(), interior_seeds.begin(), interior_seeds.end());
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  const Point lo = bbox_lo(g_);
  const double cell = scale_ / 1024.0;
  auto morton = [&](Point p) {
    auto spread = [](std::uint32_t v) {
      std::uint64_t x = v;
      x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
      x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
      x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
      x = (x | (x << 2)) & 0x3333333333333333ull;
      x = (x | (x << 1)) & 0x5555555555555555ull;
      return x;
    };
    const auto ix = static_cast<std::uint32_t>(std::clamp((p.x - lo.x) / cell, 0.0, 1048575.0));
    const auto iy = static_cast<std::uint32_t>(std::clamp((p.y - lo.y) / cell, 0.0, 1048575.0));
    return spread(ix) | (spread(iy) << 1);
  };
  std::vector<std::uint64_t> keys(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) keys[i] = morton(all[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<int> ids(all.size());
  for (std::size_t i : order) ids[i] = add_vertex(all[i]);
  for (std::size_t i = n_segment_points; i < n_segment_points + ring_points.size(); ++i)
    rosette_vertex_[static_cast<std::size_t>(ids[i])] = 1;

  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& s = pending[i];
    subs_.push_back({ids[2 * i], ids[2 * i + 1], s.boundary, s.owner, s.piece, s.fixed});
  }
  for (const ActiveRosette& ro : rosettes_) {
    const int v = add_vertex(ro.center);
    tip_vertices_.insert(v);
    tip_vertex_of_[ro.tip] = v;
    rosette_vertex_[static_cast<std::size_t>(v)] = 1;
  }
  for (const SubSeg& s : subs_) {
    if (!s.fixed) continue;
    rosette_vertex_[static_cast<std::size_t>(s.a)] = 1;
    rosette_vertex_[static_cast<std::size_t>(s.b)] = 1;
  }
}

void Mesher::split_subsegment(std::size_t s) {
  const Point a = tri_.points()[static_cast<std::size_t>(subs_[s].a)];
  const Point b = tri_.points()[static_cast<std::size_t>(subs_[s].b)];
  const int m = add_vertex(0.5 * (a + b));
  if (m == subs_[s].a || m == subs_[s].b) throw MeshError("segment split degenerated");
  SubSeg second = subs_[s];
  second.a = m;
  subs_[s].b = m;
  subs_.push_back(second);
}

std::vector<char> Mesher::classify_inside() const {
  std::unordered_set<std::uint64_t> walls;
  for (const SubSeg& s : subs_)
    if (s.boundary) walls.insert(Triangulation::edge_key(s.a, s.b));
  const auto& tris = tri_.triangles();
  std::vector<char> outside(tris.size(), 0);
  std::vector<int> queue;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    if (!tris[i].alive) continue;
    const auto& v = tris[i].v;
    if (tri_.is_super_vertex(v[0]) || tri_.is_super_vertex(v[1]) || tri_.is_super_vertex(v[2])) {
      outside[i] = 1;
      queue.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const auto& t = tris[static_cast<std::size_t>(queue[h])];
    for (int k = 0; k < 3; ++k) {
      const int n = t.nb[static_cast<std::size_t>(k)];
      if (n < 0 || outside[static_cast<std::size_t>(n)]) continue;
      if (walls.count(Triangulation::edge_key(t.v[static_cast<std::size_t>((k + 1) % 3)], t.v[static_cast<std::size_t>((k + 2) % 3)])))
        continue;
      outside[static_cast<std::size_t>(n)] = 1;
      queue.push_back(n);
    }
  }
  std::vector<char> inside(tris.size(), 0);
  for (std::size_t i = 0; i < tris.size(); ++i) inside[i] = tris[i].alive && !outside[i];
  return inside;
}

void Mesher::refine() {
  const double floor = opt_.min_size();
  const double ratio_bound = 1.0 / (2.0 * std::sin(opt_.min_angle_deg * std::numbers::pi / 180.0));
  const auto& pts = tri_.points();
  auto P = [&](int v) { return pts[static_cast<std::size_t>(v)]; };

  for (int pass = 0; pass < 100000; ++pass) {
    check_budget();
    bool changed = false;
    {
      const auto edges = tri_.edge_map();
      const std::size_t n_subs = subs_.size();
      for (std::size_t s = 0; s < n_subs; ++s) {
        const SubSeg seg = subs_[s];
        const Point a = P(seg.a), b = P(seg.b);
        auto it = edges.find(Triangulation::edge_key(seg.a, seg.b));
        bool missing = it == edges.end();
        bool encroached = false;
        if (!missing) {
          for (int t : it->second) {
            if (t < 0) continue;
            const auto& tv = tri_.triangles()[static_cast<std::size_t>(t)].v;
            for (int v : tv) {
              if (v == seg.a || v == seg.b || tri_.is_super_vertex(v)) continue;
              if (dot(a - P(v), b - P(v)) < 0.0) encroached = true;
            }
          }
        }
        if (!missing && !encroached) continue;
        if (seg.fixed) {
          if (missing) throw MeshError("rosette crack-face segment was not recovered");
          continue;
        }
        if (distance(a, b) < 2.0 * floor) {
          if (missing) throw GeometryError("segment could not be recovered above the minimum element size");
          continue;
        }
        split_subsegment(s);
        changed = true;
      }
    }
    if (changed) continue;

    const auto inside = classify_inside();
    const auto& tris = tri_.triangles();
    std::vector<std::pair<int, std::array<int, 3>>> bad;
    for (std::size_t i = 0; i < tris.size(); ++i) {
      if (!inside[i]) continue;
      const auto& v = tris[i].v;
      if (rosette_vertex_[static_cast<std::size_t>(v[0])] && rosette_vertex_[static_cast<std::size_t>(v[1])] &&
          rosette_vertex_[static_cast<std::size_t>(v[2])])
        continue;
      const Point a = P(v[0]), b = P(v[1]), c = P(v[2]);
      const double shortest = std::min({distance(a, b), distance(b, c), distance(c, a)});
      const Circle cc = circumcircle(a, b, c);
      const bool too_big = cc.radius > size_at((a + b + c) / 3.0) / std::sqrt(3.0);
      const bool poor = cc.radius / shortest > ratio_bound && shortest > floor;
      if (too_big || poor) bad.push_back({static_cast<int>(i), v});
    }
    const std::size_t n_subs = subs_.size();
    for (const auto& [tid, verts] : bad) {
      const auto& t = tri_.triangles()[static_cast<std::size_t>(tid)];
      if (!t.alive || t.v != verts) continue;
      const Circle cc = circumcircle(P(verts[0]), P(verts[1]), P(verts[2]));
      if (in_protected(cc.center, 2.2)) continue;
      std::vector<std::size_t> hit;
      for (std::size_t s = 0; s < n_subs; ++s) {
        const Point a = P(subs_[s].a), b = P(subs_[s].b);
        if (dot(a - cc.center, b - cc.center) < 0.0) hit.push_back(s);
      }
      if (!hit.empty()) {
        for (std::size_t s : hit) {
          if (subs_[s].fixed || distance(P(subs_[s].a), P(subs_[s].b)) < 2.0 * floor) continue;
          split_subsegment(s);
          changed = true;
        }
        if (changed) break;
        continue;
      }
      if (!point_in_polygon(cc.center, g_.domain.polygon)) continue;
      const std::size_t before = tri_.points().size();
      add_vertex(cc.center);
      if (tri_.points().size() == before) continue;
      changed = true;
      check_budget();
    }
    if (!changed) return;
  }
  throw MeshError("mesh refinement did not terminate");
}

Mesh Mesher::run() {
  setup_rosettes();
  build_segments();
  refine();
  return assemble_mesh();
}

Mesh Mesher::assemble_mesh() {
  const auto inside = classify_inside();
  const auto& tris = tri_.triangles();
  const auto& pts = tri_.points();

  std::vector<int> tri_ids;
  for (std::size_t i = 0; i < tris.size(); ++i)
    if (inside[i]) tri_ids.push_back(static_cast<int>(i));
  if (tri_ids.size() > opt_.max_elements)
    throw MeshError("size field produces more than " + std::to_string(opt_.max_elements) + " elements");

  // Corner numbering follows triangulation vertex order.
  std::vector<int> base(pts.size(), -1);
  for (int t : tri_ids)
    for (int v : tris[static_cast<std::size_t>(t)].v) base[static_cast<std::size_t>(v)] = 0;
  int n_corners = 0;
  for (std::size_t v = 0; v < pts.size(); ++v)
    if (base[v] == 0) base[v] = n_corners++;

  // Fracture edges and their direction along the polyline.
  std::unordered_map<std::uint64_t, std::size_t> fracture_edge;
  std::unordered_set<std::uint64_t> boundary_edge;
  std::set<int> fracture_vertices;
  std::set<int> boundary_vertices;
  for (std::size_t s = 0; s < subs_.size(); ++s) {
    const SubSeg& seg = subs_[s];
    if (seg.boundary) {
      boundary_edge.insert(Triangulation::edge_key(seg.a, seg.b));
      boundary_vertices.insert(seg.a);
      boundary_vertices.insert(seg.b);
    } else {
      fracture_edge[Triangulation::edge_key(seg.a, seg.b)] = s;
      fracture_vertices.insert(seg.a);
      fracture_vertices.insert(seg.b);
    }
  }

  // Incident triangles of fracture vertices and their sectors.
  std::unordered_map<int, std::vector<int>> incident;
  for (int t : tri_ids)
    for (int v : tris[static_cast<std::size_t>(t)].v)
      if (fracture_vertices.count(v)) incident[v].push_back(t);

  std::vector<Point> nodes(static_cast<std::size_t>(n_corners));
  std::vector<NodeKind> kinds(static_cast<std::size_t>(n_corners), NodeKind::Interior);
  for (std::size_t v = 0; v < pts.size(); ++v) {
    if (base[v] < 0) continue;
    const auto id = static_cast<std::size_t>(base[v]);
    nodes[id] = pts[v];
    const int vi = static_cast<int>(v);
    if (tip_vertices_.count(vi)) kinds[id] = NodeKind::Tip;
    else if (fracture_vertices.count(vi)) kinds[id] = NodeKind::Fracture;
    else if (boundary_vertices.count(vi)) kinds[id] = NodeKind::Boundary;
    else if (rosette_vertex_[v]) kinds[id] = NodeKind::Rosette;
  }

  // copy_of[(vertex, triangle)] -> corner node id
  std::unordered_map<std::uint64_t, int> copy_of;
  std::unordered_map<int, int> sector_count;
  auto vt_key = [](int v, int t) { return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(t); };
  for (int v : fracture_vertices) {
    auto& list = incident[v];
    std::sort(list.begin(), list.end());
    std::vector<int> parent(list.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      return x;
    };
    std::unordered_map<int, std::vector<int>> by_other;  // other vertex of an edge through v -> local triangle ids
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (int w : tris[static_cast<std::size_t>(list[i])].v) {
        if (w != v) by_other[w].push_back(static_cast<int>(i));
      }
    }
    for (auto& [w, locals] : by_other) {
      if (locals.size() != 2) continue;
      if (fracture_edge.count(Triangulation::edge_key(v, w))) continue;
      const int a = find(locals[0]), b = find(locals[1]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::map<int, int> root_to_node;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const int r = find(static_cast<int>(i));
      auto it = root_to_node.find(r);
      int node;
      if (it == root_to_node.end()) {
        if (root_to_node.empty()) {
          node = base[static_cast<std::size_t>(v)];
        } else {
          node = static_cast<int>(nodes.size());
          nodes.push_back(pts[static_cast<std::size_t>(v)]);
          kinds.push_back(kinds[static_cast<std::size_t>(base[static_cast<std::size_t>(v)])]);
        }
        root_to_node[r] = node;
      } else {
        node = it->second;
      }
      copy_of[vt_key(v, list[i])] = node;
    }
    sector_count[v] = static_cast<int>(root_to_node.size());
  }
  auto corner_node = [&](int v, int t) {
    auto it = copy_of.find(vt_key(v, t));
    return it != copy_of.end() ? it->second : base[static_cast<std::size_t>(v)];
  };

  Mesh mesh;
  mesh.geometry = g_;
  mesh.options = opt_;
  mesh.elements.reserve(tri_ids.size());
  std::unordered_map<int, int> elem_of_tri;
  for (int t : tri_ids) {
    Element e;
    for (int k = 0; k < 3; ++k) e.nodes[static_cast<std::size_t>(k)] = corner_node(tris[static_cast<std::size_t>(t)].v[static_cast<std::size_t>(k)], t);
    elem_of_tri[t] = static_cast<int>(mesh.elements.size());
    mesh.elements.push_back(e);
  }

  std::set<int> tip_nodes;
  std::map<TipRef, int> tip_node_of;
  for (const auto& [tip, v] : tip_vertex_of_) {
    const int node = base[static_cast<std::size_t>(v)];
    tip_nodes.insert(node);
    tip_node_of[tip] = node;
  }

  // Midside nodes, quarter points at active tips.
  std::unordered_map<std::uint64_t, int> midside;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    Element& el = mesh.elements[e];
    for (int k = 0; k < 3; ++k) {
      const int a = el.nodes[static_cast<std::size_t>(k)];
      const int b = el.nodes[static_cast<std::size_t>((k + 1) % 3)];
      const auto key = Triangulation::edge_key(a, b);
      auto it = midside.find(key);
      if (it == midside.end()) {
        Point pos = 0.5 * (nodes[static_cast<std::size_t>(a)] + nodes[static_cast<std::size_t>(b)]);
        NodeKind kind = NodeKind::Midside;
        if (tip_nodes.count(a) || tip_nodes.count(b)) {
          const int tip = tip_nodes.count(a) ? a : b;
          const int other = tip == a ? b : a;
          pos = nodes[static_cast<std::size_t>(tip)] + 0.25 * (nodes[static_cast<std::size_t>(other)] - nodes[static_cast<std::size_t>(tip)]);
          kind = NodeKind::QuarterPoint;
        }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(pos);
        kinds.push_back(kind);
        it = midside.emplace(key, id).first;
      }
      el.nodes[static_cast<std::size_t>(3 + k)] = it->second;
    }
  }
  auto mid_of = [&](int a, int b) { return midside.at(Triangulation::edge_key(a, b)); };

  // Triangle lookup by directed edge for boundary and face extraction.
  std::unordered_map<std::uint64_t, int> directed;  // (a << 32 | b) where a->b is counterclockwise in triangle
  for (int t : tri_ids) {
    const auto& v = tris[static_cast<std::size_t>(t)].v;
    for (int k = 0; k < 3; ++k)
      directed[(static_cast<std::uint64_t>(v[static_cast<std::size_t>(k)]) << 32) | static_cast<std::uint32_t>(v[static_cast<std::size_t>((k + 1) % 3)])] = t;
  }
  auto tri_with = [&](int a, int b) {
    auto it = directed.find((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
    return it == directed.end() ? -1 : it->second;
  };

  for (const SubSeg& s : subs_) {
    if (!s.boundary) continue;
    int a = s.a, b = s.b;
    int t = tri_with(a, b);
    if (t < 0) {
      std::swap(a, b);
      t = tri_with(a, b);
    }
    if (t < 0) throw MeshError("boundary segment missing from the triangulation");
    const int na = corner_node(a, t), nb = corner_node(b, t);
    mesh.boundary_edges.push_back({{na, mid_of(na, nb), nb}, s.owner});
  }
  std::sort(mesh.boundary_edges.begin(), mesh.boundary_edges.end(), [](const BoundaryEdge& x, const BoundaryEdge& y) {
    return std::tie(x.domain_edge, x.nodes[0]) < std::tie(y.domain_edge, y.nodes[0]);
  });

  // Fracture faces, ordered along each polyline.
  const std::size_t n_frac = g_.fractures.size();
  std::vector<std::vector<std::size_t>> frac_subs(n_frac);
  for (std::size_t s = 0; s < subs_.size(); ++s)
    if (!subs_[s].boundary) frac_subs[static_cast<std::size_t>(subs_[s].owner)].push_back(s);
  mesh.stations.resize(n_frac);
  for (std::size_t f = 0; f < n_frac; ++f) {
    auto& list = frac_subs[f];
    const auto& fv = g_.fractures[f].vertices;
    std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
      const SubSeg& sx = subs_[x];
      const SubSeg& sy = subs_[y];
      if (sx.piece != sy.piece) return sx.piece < sy.piece;
      const Point origin = fv[static_cast<std::size_t>(sx.piece)];
      return distance(origin, pts[static_cast<std::size_t>(sx.a)]) < distance(origin, pts[static_cast<std::size_t>(sy.a)]);
    });
    // subsegment endpoints may be stored reversed after splits; orient each along the polyline
    double arc = 0.0;
    auto& st = mesh.stations[f];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const SubSeg& s = subs_[list[i]];
      const Point origin = fv[static_cast<std::size_t>(s.piece)];
      int a = s.a, b = s.b;
      if (distance(origin, pts[static_cast<std::size_t>(a)]) > distance(origin, pts[static_cast<std::size_t>(b)])) std::swap(a, b);
      const int left = tri_with(a, b);
      const int right = tri_with(b, a);
      if (left < 0 || right < 0) throw MeshError("fracture segment is not interior to the mesh");
      const int ap = corner_node(a, left), bp = corner_node(b, left);
      const int am = corner_node(a, right), bm = corner_node(b, right);
      FacePair fp{static_cast<int>(f), {ap, mid_of(ap, bp), bp}, {am, mid_of(am, bm), bm}};
      mesh.fracture_face_pairs.push_back(fp);
      const double len = distance(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]);
      st.push_back({ap, am, true, sector_count[a] > 2, arc});
      // midside arc position: quarter point lies at len/4 from the tip end
      double mid_arc = arc + 0.5 * len;
      if (kinds[static_cast<std::size_t>(fp.plus[1])] == NodeKind::QuarterPoint)
        mid_arc = tip_nodes.count(ap) ? arc + 0.25 * len : arc + 0.75 * len;
      st.push_back({fp.plus[1], fp.minus[1], false, false, mid_arc});
      arc += len;
      if (i + 1 == list.size()) st.push_back({bp, bm, true, sector_count[b] > 2, arc});
    }
  }

  for (const auto& [tip, node] : tip_node_of) {
    TipRosette tr;
    tr.tip = tip;
    tr.node = node;
    for (const ActiveRosette& ro : rosettes_) {
      if (ro.tip == tip) {
        tr.radius = ro.radius;
        tr.sectors = ro.sectors;
      }
    }
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      const auto& n = mesh.elements[e].nodes;
      if (n[0] == node || n[1] == node || n[2] == node) tr.elements.push_back(static_cast<int>(e));
    }
    mesh.quarter_point_elements.insert(mesh.quarter_point_elements.end(), tr.elements.begin(), tr.elements.end());
    mesh.tips.push_back(std::move(tr));
  }
  std::sort(mesh.quarter_point_elements.begin(), mesh.quarter_point_elements.end());

  for (const Point& p : g_.domain.polygon) {
    int found = -1;
    for (std::size_t v = 0; v < pts.size() && found < 0; ++v)
      if (base[v] >= 0 && pts[v] == p) found = base[v];
    mesh.domain_vertex_nodes.push_back(found);
  }

  mesh.nodes = std::move(nodes);
  mesh.kinds = std::move(kinds);
  return mesh;
}

}  // namespace

Mesh build_mesh(const Geometry& geometry, const MeshOptions& options, const RemeshRequest& request) {
  const Geometry g = normalized_geometry(geometry);
  validate_geometry(g);
  if (!(options.size.h_tip > 0.0) || options.size.h_tip > options.size.h_max || options.size.grading < 0.0)
    throw GeometryError("size field requires 0 < h_tip <= h_max and grading >= 0");
  Mesher mesher(g, options, request);
  Mesh mesh = mesher.run();
  if (options.smoothing_iterations > 0) mesh = laplacian_smooth(mesh, options.smoothing_iterations);
  return mesh;
}

Mesh triangulate(const Geometry& geometry, const MeshOptions& options) {
  return build_mesh(geometry, options, RemeshRequest{});
}

std::vector<Point> corner_positions(const Mesh& mesh) {
  std::vector<Point> out;
  std::vector<char> seen(mesh.nodes.size(), 0);
  for (const Element& e : mesh.elements) {
    for (int k = 0; k < 3; ++k) {
      const auto n = static_cast<std::size_t>(e.nodes[static_cast<std::size_t>(k)]);
      if (seen[n]) continue;
      seen[n] = 1;
      out.push_back(mesh.nodes[n]);
    }
  }
  std::sort(out.begin(), out.end(), [](Point a, Point b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace wingcrack
