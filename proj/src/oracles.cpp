#include "wingcrack/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wingcrack/error.hpp"

namespace wingcrack::oracles {

// Tada, Paris & Irwin, centre crack in a finite plate (Feddersen secant form).
double griffith_k1(double sigma, double a, double W) {
  if (!(a >= 0.0) || !(W > 0.0) || a / W >= 0.5) throw Error("griffith_k1 requires 0 <= a / W < 0.5");
  return sigma * std::sqrt(std::numbers::pi * a) * std::sqrt(1.0 / std::cos(std::numbers::pi * a / W));
}

// Resolved tractions on the flaw plane: sigma_n = sigma sin^2 beta, tau = sigma sin beta cos beta.
SlidingCrack sliding_crack_k2(double sigma, double beta, double mu, double c, double a) {
  const double sn = sigma * std::sin(beta) * std::sin(beta);
  if (!(sn > 0.0)) throw Error("sliding_crack_k2 requires a closed flaw (sigma sin^2 beta > 0)");
  const double tau = sigma * std::sin(beta) * std::cos(beta);
  SlidingCrack out;
  out.tau_eff = std::max(tau - mu * sn - c, 0.0);
  out.K_II = out.tau_eff * std::sqrt(std::numbers::pi * a);
  return out;
}

double pure_shear_wing_angle() { return std::acos(1.0 / 3.0); }

// Westergaard: total opening 4 (1 - nu^2) sigma sqrt(a^2 - x^2) / E.
double westergaard_opening(double sigma, double a, double x, double E, double nu) {
  if (std::abs(x) >= a) return 0.0;
  return 4.0 * (1.0 - nu * nu) * sigma * std::sqrt(a * a - x * x) / E;
}

}  // namespace wingcrack::oracles
