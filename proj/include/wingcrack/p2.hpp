#pragma once

#include <array>

#include "wingcrack/geometry.hpp"

namespace wingcrack::p2 {

/// Reference-triangle point (xi, eta); area coordinates are (1 - xi - eta, xi, eta).
struct QuadPoint {
  double xi;
  double eta;
  double weight;  // includes the reference area 1/2
};

/// 7-point degree-5 rule used for all element integrals.
inline constexpr std::array<QuadPoint, 7> kGauss7 = [] {
  constexpr double a1 = 0.059715871789769820, b1 = 0.470142064105115090, w1 = 0.132394152788506181;
  constexpr double a2 = 0.797426985353087322, b2 = 0.101286507323456339, w2 = 0.125939180544827153;
  return std::array<QuadPoint, 7>{{
      {1.0 / 3.0, 1.0 / 3.0, 0.5 * 0.225},
      {b1, b1, 0.5 * w1},
      {a1, b1, 0.5 * w1},
      {b1, a1, 0.5 * w1},
      {b2, b2, 0.5 * w2},
      {a2, b2, 0.5 * w2},
      {b2, a2, 0.5 * w2},
  }};
}();

/// Node positions in the reference triangle.
inline constexpr std::array<std::array<double, 2>, 6> kNodes{{
    {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}}};

inline std::array<double, 6> shape(double xi, double eta) {
  const double l1 = 1.0 - xi - eta;
  return {l1 * (2.0 * l1 - 1.0), xi * (2.0 * xi - 1.0), eta * (2.0 * eta - 1.0),
          4.0 * l1 * xi, 4.0 * xi * eta, 4.0 * eta * l1};
}

/// dN/dxi and dN/deta.
inline std::array<std::array<double, 6>, 2> shape_gradients(double xi, double eta) {
  const double l1 = 1.0 - xi - eta;
  std::array<std::array<double, 6>, 2> g{};
  g[0] = {-(4.0 * l1 - 1.0), 4.0 * xi - 1.0, 0.0, 4.0 * (l1 - xi), 4.0 * eta, -4.0 * eta};
  g[1] = {-(4.0 * l1 - 1.0), 0.0, 4.0 * eta - 1.0, -4.0 * xi, 4.0 * xi, 4.0 * (l1 - eta)};
  return g;
}

struct Jacobian {
  double j11, j12, j21, j22;  // d(x, y)/d(xi, eta), row = physical component
  double det() const { return j11 * j22 - j12 * j21; }
};

inline Jacobian jacobian(const std::array<Point, 6>& x, double xi, double eta) {
  const auto g = shape_gradients(xi, eta);
  Jacobian j{0, 0, 0, 0};
  for (int i = 0; i < 6; ++i) {
    j.j11 += x[i].x * g[0][i];
    j.j12 += x[i].x * g[1][i];
    j.j21 += x[i].y * g[0][i];
    j.j22 += x[i].y * g[1][i];
  }
  return j;
}

/// Physical gradients dN/dx, dN/dy at (xi, eta); returns det J through the last argument.
inline std::array<std::array<double, 6>, 2> physical_gradients(const std::array<Point, 6>& x, double xi, double eta,
                                                               double& det) {
  const auto g = shape_gradients(xi, eta);
  const Jacobian j = jacobian(x, xi, eta);
  det = j.det();
  std::array<std::array<double, 6>, 2> d{};
  for (int i = 0; i < 6; ++i) {
    d[0][i] = (j.j22 * g[0][i] - j.j21 * g[1][i]) / det;
    d[1][i] = (-j.j12 * g[0][i] + j.j11 * g[1][i]) / det;
  }
  return d;
}

inline Point map(const std::array<Point, 6>& x, double xi, double eta) {
  const auto n = shape(xi, eta);
  Point p{0, 0};
  for (int i = 0; i < 6; ++i) p = p + n[i] * x[i];
  return p;
}

/// 3-point Gauss-Legendre on [0, 1] for quadratic edges.
inline constexpr std::array<std::array<double, 2>, 3> kLine3{{
    {0.5 - 0.38729833462074170, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + 0.38729833462074170, 5.0 / 18.0}}};

/// Quadratic line shape functions on s in [0, 1] for nodes (start, middle, end).
inline std::array<double, 3> line_shape(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)};
}

inline std::array<double, 3> line_shape_derivative(double s) {
  return {4.0 * s - 3.0, 4.0 - 8.0 * s, 4.0 * s - 1.0};
}

/// |dx/ds| of a quadratic edge.
inline double line_metric(const std::array<Point, 3>& x, double s) {
  const auto d = line_shape_derivative(s);
  Vec2 t{0, 0};
  for (int i = 0; i < 3; ++i) t = t + d[i] * x[i];
  return norm(t);
}

}  // namespace wingcrack::p2
