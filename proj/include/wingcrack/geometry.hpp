#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace wingcrack {

/// Position or vector in the plane (model length units).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

using Vec2 = Point;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }
/// Counterclockwise rotation by 90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return {a.x / n, a.y / n};
}
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Closest distance from p to the closed segment [a, b].
double point_segment_distance(Point p, Point a, Point b);

/// Parameter t in [0, 1] of the projection of p onto segment [a, b].
double project_to_segment(Point p, Point a, Point b);

struct SegmentHit {
  double t;  // parameter along the first segment
  double u;  // parameter along the second segment
  Point point;
};

/// Proper or touching intersection of [p0, p1] with [q0, q1]; collinear overlaps are not reported.
std::optional<SegmentHit> intersect_segments(Point p0, Point p1, Point q0, Point q1);

double signed_area(std::span<const Point> polygon);
bool point_in_polygon(Point p, std::span<const Point> polygon);
bool polygon_is_simple(std::span<const Point> polygon);
bool polyline_self_intersects(std::span<const Point> polyline);

double polyline_length(std::span<const Point> polyline);

struct Circle {
  Point center;
  double radius;
};
Circle circumcircle(Point a, Point b, Point c);

/// Smallest interior angle of a straight-sided triangle, in degrees.
double min_angle_deg(Point a, Point b, Point c);

}  // namespace wingcrack
