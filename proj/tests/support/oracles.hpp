#pragma once

// Independent reference values for the tests. Everything here goes through
// Boost.Math or plain long-double summation, never through the library.

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <limits>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Upper Gaussian tail (1/sqrt(2 pi)) int_x^inf e^{-t^2/2} dt.
inline double phi(double x) { return 0.5 * boost::math::erfc(x / std::sqrt(2.0)); }

/// The same tail by adaptive quadrature on [x, inf).
inline double phi_quad(double x) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double u) { return std::exp(-0.5 * (x + u) * (x + u)) / std::sqrt(2 * kPi); };
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

/// Phi_c(t) = phi(t) + (1/sqrt c)(1 - phi(t/sqrt c)) exp((1-c)t^2/(2c)), evaluated
/// in long double straight from the definition (fine for moderate |t|).
/// 1 - phi(u) is taken as phi(-u).
inline double confinement(double t, double c) {
  const long double a = phi(t);
  const long double b = static_cast<long double>(phi(-t / std::sqrt(c))) / std::sqrt(static_cast<long double>(c));
  return static_cast<double>(a + b * std::exp(static_cast<long double>((1 - c) * t * t / (2 * c))));
}

/// phi(t) - e^{-t^2/2}/(sqrt(2 pi) t), t < 0.
inline double confinement_ultraweak(double t) {
  return phi(t) - std::exp(-0.5 * t * t) / (std::sqrt(2 * kPi) * t);
}

/// Generic Gauss-Kronrod on [a, b].
template <class F>
double gk(F f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

/// b(x) = (1/sqrt(2 pi)) int_{-inf}^0 e^{-(x-t)^2/2} / den(t) dt for real x.
template <class Den>
double b_profile(double x, Den den) {
  auto f = [&](double t) { return std::exp(-0.5 * (x - t) * (x - t)) / den(t) / std::sqrt(2 * kPi); };
  const double lo = std::min(x, 0.0) - 40.0;
  return gk(f, lo, 0.0, 1e-14);
}

/// Gamma(s, x) by quadrature of e^{-x} int_0^inf (x+u)^{s-1} e^{-u} du (any real s, x > 0).
inline double upper_gamma_quad(double s, double x) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double u) { return std::exp((s - 1) * std::log(x + u) - u); };
  return std::exp(-x) * es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14);
}

inline double reg_lower(double a, double x) { return boost::math::gamma_p(a, x); }
inline double reg_upper(double a, double x) { return boost::math::gamma_q(a, x); }
inline double lgamma(double a) { return boost::math::lgamma(a); }

/// log of the monomial norm 2 int r^{2j+1} e^{-n Q_c(r)} dr for Q = r^2 and the
/// modified potential Q_c, by Boost quadrature in r around the saddle.
inline double ginibre_log_norm(int n, double c, int j) {
  auto qc = [&](double r) {
    if (r <= 1.0) return r * r;
    return c * r * r + (1.0 - c) * (1.0 + 2.0 * std::log(r));
  };
  const double r0 = std::sqrt((j + 1.0) / n);
  auto logf = [&](double r) { return std::log(2.0) + (2.0 * j + 1) * std::log(r) - n * qc(r); };
  const double ref = logf(std::max(r0, 1e-300));
  auto f = [&](double r) { return r <= 0 ? 0.0 : std::exp(logf(r) - ref); };
  const double w = 1.0 / std::sqrt(static_cast<double>(n));
  const double lo = std::max(0.0, r0 - 40 * w), hi = r0 + 40 * w / std::min(1.0, std::sqrt(c));
  double total = 0.0;
  if (lo < 1.0 && hi > 1.0)
    total = gk(f, lo, 1.0) + gk(f, 1.0, hi);
  else
    total = gk(f, lo, hi);
  return ref + std::log(total);
}

/// Standard Gumbel CDF.
inline double gumbel(double x) { return std::exp(-std::exp(-x)); }

}  // namespace oracle
