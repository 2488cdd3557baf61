#include "wingcrack/detail/predicates.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

namespace wingcrack::detail {

namespace {

// Wide enough that sums of products of doubles with moderate exponent spread are exact.
using Exact = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>,
                                            boost::multiprecision::et_off>;

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

double sign_of(const Exact& v) {
  if (v > 0) return 1.0;
  if (v < 0) return -1.0;
  return 0.0;
}

}  // namespace

double orient2d(Point a, Point b, Point c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  if (std::abs(det) > kOrientBound * detsum) return det;

  const Exact ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const Exact e = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return sign_of(e) * std::numeric_limits<double>::min();
}

double incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  if (std::abs(det) > kIncircleBound * permanent) return det;

  const Exact eadx = Exact(a.x) - Exact(d.x), eady = Exact(a.y) - Exact(d.y);
  const Exact ebdx = Exact(b.x) - Exact(d.x), ebdy = Exact(b.y) - Exact(d.y);
  const Exact ecdx = Exact(c.x) - Exact(d.x), ecdy = Exact(c.y) - Exact(d.y);
  const Exact e = (eadx * eadx + eady * eady) * (ebdx * ecdy - ecdx * ebdy) +
                  (ebdx * ebdx + ebdy * ebdy) * (ecdx * eady - eadx * ecdy) +
                  (ecdx * ecdx + ecdy * ecdy) * (eadx * ebdy - ebdx * eady);
  return sign_of(e) * std::numeric_limits<double>::min();
}

}  // namespace wingcrack::detail
