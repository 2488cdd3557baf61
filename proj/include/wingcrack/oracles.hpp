#pragma once

namespace wingcrack::oracles {

/// Centre crack of half-length a in a plate of width W under remote tension sigma, with the
/// secant finite-width correction. Requires a / W < 0.5.
double griffith_k1(double sigma, double a, double W);

struct SlidingCrack {
  double tau_eff = 0.0;
  double K_II = 0.0;
};

/// Closed crack of half-length a at angle beta to the compression axis: resolved shear minus
/// friction and cohesion, clamped at zero. sigma is the compressive magnitude.
SlidingCrack sliding_crack_k2(double sigma, double beta, double mu, double c, double a);

/// Magnitude of the pure mode II kink angle, arccos(1/3).
double pure_shear_wing_angle();

/// Plane-strain crack opening displacement of an isolated crack |x| < a under remote tension sigma.
double westergaard_opening(double sigma, double a, double x, double E, double nu);

}  // namespace wingcrack::oracles
