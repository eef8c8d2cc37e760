#pragma once

// Scalar special functions. Log-valued variants never overflow; the plain
// variants are thin wrappers and may overflow or underflow by contract.

namespace confgas {

/// Gaussian upper tail, (1/sqrt(2 pi)) * int_x^inf exp(-t^2/2) dt.
double phi(double x);
/// log(phi(x)), accurate for large positive x.
double log_phi(double x);
/// exp(x^2) * erfc(x).
double erfcx_scaled(double x);
/// log(erfcx_scaled(x)); finite for all finite x.
double log_erfcx_scaled(double x);

/// Regularized lower incomplete gamma P(a, x). Requires a > 0, x >= 0.
double reg_gamma_lower(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_gamma_upper(double a, double x);
/// log of the unregularized lower incomplete gamma gamma(a, x), a > 0, x > 0.
double log_lower_gamma(double a, double x);
/// log of the unregularized upper incomplete gamma Gamma(a, x), a > 0, x >= 0.
double log_upper_gamma(double a, double x);
/// log Gamma(s, x) for any real s and x > 0. Uses the continued fraction
/// directly when s <= 0; throws ConvergenceError if it stalls.
double log_upper_gamma_general(double s, double x);

}  // namespace confgas
