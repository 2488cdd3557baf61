#include "wingcrack/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "wingcrack/detail/predicates.hpp"

namespace wingcrack {

double project_to_segment(Point p, Point a, Point b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
}

double point_segment_distance(Point p, Point a, Point b) {
  const double t = project_to_segment(p, a, b);
  return distance(p, a + t * (b - a));
}

std::optional<SegmentHit> intersect_segments(Point p0, Point p1, Point q0, Point q1) {
  const double o1 = detail::orient2d(p0, p1, q0);
  const double o2 = detail::orient2d(p0, p1, q1);
  const double o3 = detail::orient2d(q0, q1, p0);
  const double o4 = detail::orient2d(q0, q1, p1);
  if ((o1 > 0 && o2 > 0) || (o1 < 0 && o2 < 0)) return std::nullopt;
  if ((o3 > 0 && o4 > 0) || (o3 < 0 && o4 < 0)) return std::nullopt;
  const Vec2 r = p1 - p0;
  const Vec2 s = q1 - q0;
  const double denom = cross(r, s);
  if (denom == 0.0) return std::nullopt;
  const double t = std::clamp(cross(q0 - p0, s) / denom, 0.0, 1.0);
  const double u = std::clamp(cross(q0 - p0, r) / denom, 0.0, 1.0);
  return SegmentHit{t, u, p0 + t * r};
}

double signed_area(std::span<const Point> polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % polygon.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

bool point_in_polygon(Point p, std::span<const Point> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

bool segments_cross(Point a, Point b, Point c, Point d) {
  return intersect_segments(a, b, c, d).has_value();
}

}  // namespace

bool polygon_is_simple(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_cross(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return std::abs(signed_area(polygon)) > 0.0;
}

bool polyline_self_intersects(std::span<const Point> polyline) {
  const std::size_t n = polyline.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (segments_cross(polyline[i], polyline[i + 1], polyline[j], polyline[j + 1])) return true;
    }
  }
  // consecutive segments folding back onto each other
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const Vec2 u = polyline[i + 1] - polyline[i];
    const Vec2 v = polyline[i + 2] - polyline[i + 1];
    if (cross(u, v) == 0.0 && dot(u, v) < 0.0) return true;
  }
  return false;
}

double polyline_length(std::span<const Point> polyline) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) len += distance(polyline[i], polyline[i + 1]);
  return len;
}

Circle circumcircle(Point a, Point b, Point c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = dot(ab, ab);
  const double ac2 = dot(ac, ac);
  const Vec2 off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return {a + off, norm(off)};
}

double min_angle_deg(Point a, Point b, Point c) {
  const double la = distance(b, c);
  const double lb = distance(c, a);
  const double lc = distance(a, b);
  auto angle = [](double opposite, double s1, double s2) {
    const double cosv = std::clamp((s1 * s1 + s2 * s2 - opposite * opposite) / (2.0 * s1 * s2), -1.0, 1.0);
    return std::acos(cosv);
  };
  const double m = std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
  return m * 180.0 / std::numbers::pi;
}

}  // namespace wingcrack
