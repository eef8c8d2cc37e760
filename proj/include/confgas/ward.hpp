#pragma once

// Numerical checks of the Gaussian identity, the mass-one equation and
// Ward's equation for candidate edge profiles s(xi), plus the tail chain
// used for the extreme-value constant.

#include <functional>
#include <vector>

#include "confgas/profiles.hpp"

namespace confgas {

struct Interval {
  double lo, hi;  ///< lo may be -inf, hi must be finite
};

struct EdgeProfileSpec {
  ConfinementParam c;
  std::function<double(double)> s;
  std::vector<Interval> support;

  /// s = scale * 1_E / Phi_c.
  static EdgeProfileSpec indicator_over_phi(double c, std::vector<Interval> e, double scale = 1.0);
  /// s = 1_{(-inf, c0)} / Phi_c, the edge profile of the confined ensembles.
  static EdgeProfileSpec standard(double c, double c0 = 0.0);
  /// s = 1_E without the Phi_c weight.
  static EdgeProfileSpec plain_indicator(double c, std::vector<Interval> e);

  /// S(z) = (1/sqrt(2 pi)) int exp(-(xi - z)^2 / 2) s(xi) dxi.
  double S(double z) const;
  /// S'(z), differentiated under the integral.
  double dS(double z) const;
};

/// Relative mismatch of sqrt(2/pi) int exp(-2u^2 + 2 xi u + 2(1-c) u_+^2) du
/// against exp(xi^2/2) Phi_c(xi), with exp(xi^2/2) divided out.
double gaussian_identity_residual(double xi, double c);

/// |(1/sqrt(2 pi)) int exp(-(xi - 2x)^2/2) s^2 Phi_c dxi - S(2x)| / S(2x).
double mass_one_residual(double x, const EdgeProfileSpec& spec);

/// L_1(x) = -(1/sqrt(2 pi)) int_{xi > eta} exp(-(eta - x)^2/2) s(xi) s(eta) Phi_c(xi).
double ward_L1(double x, const EdgeProfileSpec& spec);

/// |L_1 - S' - (x - c0) S| / (|S'| + |x - c0| S + S).
double ward_residual(double x, const EdgeProfileSpec& spec, double c0 = 0.0);

struct TailChain {
  double log_e;          ///< log of int_r^inf e^{(1-c)s^2/2} int_{-inf}^0 e^{-(s-xi)^2/2}/Phi_c dxi ds
  double log_asymptote;  ///< log of e^{-c r^2/2} / (c Phi_c(0) r^2)
  double ratio() const;
};

TailChain tail_constant_chain(double r, const EdgeProfileSpec& spec);

/// f(v) = int_{-c v}^0 e^{(1-c) xi^2 / (2c)} / Phi_c(xi) dxi.
double tail_f(double v, double c);
/// f'(v).
double tail_f1(double v, double c);

}  // namespace confgas
