#pragma once

#include "wingcrack/geometry.hpp"

namespace wingcrack::detail {

/// Twice the signed area of (a, b, c): positive when counterclockwise. Sign is exact.
double orient2d(Point a, Point b, Point c);

/// Positive when d lies strictly inside the circumcircle of the counterclockwise triangle (a, b, c). Sign is exact.
double incircle(Point a, Point b, Point c, Point d);

}  // namespace wingcrack::detail
