#include "wingcrack/detail/triangulation.hpp"

#include <algorithm>
#include <stdexcept>

#include "wingcrack/detail/predicates.hpp"

namespace wingcrack::detail {

Triangulation::Triangulation(Point lo, Point hi) {
  const Point c = 0.5 * (lo + hi);
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  const double r = 50.0 * span;
  points_.push_back({c.x - 2.0 * r, c.y - r});
  points_.push_back({c.x + 2.0 * r, c.y - r});
  points_.push_back({c.x, c.y + 2.0 * r});
  last_ = new_tri({0, 1, 2});
}

int Triangulation::new_tri(std::array<int, 3> v) {
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<int>(tris_.size());
    tris_.emplace_back();
  }
  Tri& t = tris_[static_cast<std::size_t>(id)];
  t.v = v;
  t.nb = {-1, -1, -1};
  t.alive = true;
  ++alive_;
  return id;
}

int Triangulation::walk(Point p, int start) const {
  int cur = start;
  // Rotating the first tested edge keeps the walk from cycling on degenerate inputs.
  std::size_t step = 0;
  const std::size_t limit = 4 * tris_.size() + 16;
  while (step++ < limit) {
    const Tri& t = tris_[static_cast<std::size_t>(cur)];
    int next = -1;
    for (int k = 0; k < 3; ++k) {
      const int i = static_cast<int>((k + step) % 3);
      const Point a = points_[static_cast<std::size_t>(t.v[(i + 1) % 3])];
      const Point b = points_[static_cast<std::size_t>(t.v[(i + 2) % 3])];
      if (orient2d(a, b, p) < 0.0) {
        next = t.nb[i];
        break;
      }
    }
    if (next == -1) {
      bool inside = true;
      for (int i = 0; i < 3; ++i) {
        const Point a = points_[static_cast<std::size_t>(t.v[(i + 1) % 3])];
        const Point b = points_[static_cast<std::size_t>(t.v[(i + 2) % 3])];
        if (orient2d(a, b, p) < 0.0) inside = false;
      }
      return inside ? cur : -1;
    }
    cur = next;
  }
  return -1;
}

int Triangulation::locate(Point p) const {
  int found = walk(p, last_);
  if (found >= 0) return found;
  for (std::size_t i = 0; i < tris_.size(); ++i) {
    if (!tris_[i].alive) continue;
    const Tri& t = tris_[i];
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k) {
      if (orient2d(points_[static_cast<std::size_t>(t.v[(k + 1) % 3])], points_[static_cast<std::size_t>(t.v[(k + 2) % 3])], p) < 0.0)
        inside = false;
    }
    if (inside) return static_cast<int>(i);
  }
  return -1;
}

int Triangulation::insert(Point p) {
  const int start = locate(p);
  if (start < 0) throw std::runtime_error("triangulation: point outside the super-triangle");
  {
    const Tri& t = tris_[static_cast<std::size_t>(start)];
    for (int k = 0; k < 3; ++k)
      if (points_[static_cast<std::size_t>(t.v[k])] == p) return t.v[k];
  }
  const int vid = static_cast<int>(points_.size());
  points_.push_back(p);

  std::vector<int> cavity{start};
  std::vector<char> in_cavity(tris_.size(), 0);
  in_cavity[static_cast<std::size_t>(start)] = 1;
  for (std::size_t head = 0; head < cavity.size(); ++head) {
    const Tri& t = tris_[static_cast<std::size_t>(cavity[head])];
    for (int i = 0; i < 3; ++i) {
      const int n = t.nb[i];
      if (n < 0 || in_cavity[static_cast<std::size_t>(n)]) continue;
      const Tri& u = tris_[static_cast<std::size_t>(n)];
      if (incircle(points_[static_cast<std::size_t>(u.v[0])], points_[static_cast<std::size_t>(u.v[1])],
                   points_[static_cast<std::size_t>(u.v[2])], p) > 0.0) {
        in_cavity[static_cast<std::size_t>(n)] = 1;
        cavity.push_back(n);
      }
    }
  }

  struct Boundary {
    int a, b, outer;
  };
  std::vector<Boundary> boundary;
  // Grow the cavity until it is star-shaped with respect to p.
  for (bool changed = true; changed;) {
    changed = false;
    boundary.clear();
    for (int tid : cavity) {
      const Tri& t = tris_[static_cast<std::size_t>(tid)];
      for (int i = 0; i < 3; ++i) {
        const int n = t.nb[i];
        if (n >= 0 && in_cavity[static_cast<std::size_t>(n)]) continue;
        const int a = t.v[(i + 1) % 3];
        const int b = t.v[(i + 2) % 3];
        if (orient2d(points_[static_cast<std::size_t>(a)], points_[static_cast<std::size_t>(b)], p) <= 0.0 && n >= 0) {
          in_cavity[static_cast<std::size_t>(n)] = 1;
          cavity.push_back(n);
          changed = true;
          break;
        }
        boundary.push_back({a, b, n});
      }
      if (changed) break;
    }
  }

  for (int tid : cavity) {
    tris_[static_cast<std::size_t>(tid)].alive = false;
    free_.push_back(tid);
    --alive_;
  }
  // Reuse slots in a fixed order so the result only depends on the insertion sequence.
  std::sort(free_.begin(), free_.end(), std::greater<>());

  std::unordered_map<int, int> by_first;
  std::unordered_map<int, int> by_second;
  std::vector<int> created;
  created.reserve(boundary.size());
  for (const Boundary& e : boundary) {
    const int id = new_tri({e.a, e.b, vid});
    Tri& t = tris_[static_cast<std::size_t>(id)];
    t.nb[2] = e.outer;
    if (e.outer >= 0) {
      Tri& o = tris_[static_cast<std::size_t>(e.outer)];
      for (int i = 0; i < 3; ++i) {
        const int oa = o.v[(i + 1) % 3];
        const int ob = o.v[(i + 2) % 3];
        if (oa == e.b && ob == e.a) o.nb[i] = id;
      }
    }
    by_first[e.a] = id;
    by_second[e.b] = id;
    created.push_back(id);
  }
  for (int id : created) {
    Tri& t = tris_[static_cast<std::size_t>(id)];
    // edge opposite v[0] runs b -> p; the neighbour starts at b
    t.nb[0] = by_first.at(t.v[1]);
    // edge opposite v[1] runs p -> a; the neighbour ends at a
    t.nb[1] = by_second.at(t.v[0]);
  }
  last_ = created.empty() ? last_ : created.back();
  return vid;
}

std::unordered_map<std::uint64_t, std::array<int, 2>> Triangulation::edge_map() const {
  std::unordered_map<std::uint64_t, std::array<int, 2>> map;
  map.reserve(alive_ * 2);
  for (std::size_t i = 0; i < tris_.size(); ++i) {
    const Tri& t = tris_[i];
    if (!t.alive) continue;
    for (int k = 0; k < 3; ++k) {
      const int a = t.v[(k + 1) % 3];
      const int b = t.v[(k + 2) % 3];
      auto [it, inserted] = map.try_emplace(edge_key(a, b), std::array<int, 2>{-1, -1});
      // slot 0: triangle where the edge runs from the smaller to the larger id
      it->second[a < b ? 0 : 1] = static_cast<int>(i);
    }
  }
  return map;
}

}  // namespace wingcrack::detail
