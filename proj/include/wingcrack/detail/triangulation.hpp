#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wingcrack/geometry.hpp"

namespace wingcrack::detail {

/// Incremental Delaunay triangulation (Bowyer-Watson) inside a bounding super-triangle.
/// Vertices 0..2 are the super-triangle corners.
class Triangulation {
 public:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};  // nb[i] is across the edge opposite v[i]
    bool alive = false;
  };

  Triangulation(Point lo, Point hi);

  /// Inserts p and returns its vertex id; returns the existing id when p coincides with a vertex.
  int insert(Point p);

  const std::vector<Point>& points() const { return points_; }
  const std::vector<Tri>& triangles() const { return tris_; }
  std::size_t alive_count() const { return alive_; }

  /// Triangle containing p (on its boundary or inside), or -1.
  int locate(Point p) const;

  static std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(a < b ? a : b);
    const auto hi = static_cast<std::uint64_t>(a < b ? b : a);
    return (hi << 32) | lo;
  }

  /// Undirected edge key -> {triangle where the edge runs low->high id, triangle where it runs high->low}.
  std::unordered_map<std::uint64_t, std::array<int, 2>> edge_map() const;

  bool is_super_vertex(int v) const { return v < 3; }

 private:
  int new_tri(std::array<int, 3> v);
  int walk(Point p, int start) const;

  std::vector<Point> points_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::size_t alive_ = 0;
  int last_ = 0;
};

}  // namespace wingcrack::detail
