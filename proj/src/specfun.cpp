#include "confgas/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "confgas/error.hpp"

namespace confgas {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

// Laplace continued fraction for erfcx, usable for x >= 4:
// sqrt(pi)*erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
double erfcx_cf(double x) {
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = x + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return 1.0 / (f * std::sqrt(std::numbers::pi));
}

// log of sum_k x^k / (a (a+1) ... (a+k)), so that gamma(a,x) = x^a e^-x * sum.
double log_gamma_series(double a, double x) {
  double term = 1.0 / a, sum = term, ap = a;
  for (int k = 0; k < kMaxIter; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return std::log(sum);
  }
  throw ConvergenceError("incomplete gamma series did not converge for a=" + std::to_string(a) +
                         ", x=" + std::to_string(x));
}

// Modified Lentz evaluation of the continued fraction
// Gamma(s,x) = x^s e^-x / (x+1-s - 1(1-s)/(x+3-s - 2(2-s)/(x+5-s - ...))),
// valid for every real s when x > 0. Returns log of the fraction.
double log_upper_gamma_cf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  // the fraction can change sign transiently for s > x; track sign
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      if (!(h > 0.0)) break;
      return std::log(h);
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge for s=" +
                         std::to_string(s) + ", x=" + std::to_string(x));
}

void require_pair(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: a must be > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be >= 0");
}

// log P(a,x) and log Q(a,x) together, choosing the stable branch.
struct LogPQ {
  double log_p, log_q;
};

// log(x^a e^-x / Gamma(a)). For large a the naive form cancels terms of size
// a log x; Stirling's series keeps the error at a few ulps of the result.
double log_gamma_prefix(double a, double x) {
  if (a < 20.0) return a * std::log(x) - x - std::lgamma(a);
  const double d = (x - a) / a;
  const double a2 = a * a;
  const double stirling = (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * a2)) / a2) / a2) / a;
  return a * (std::log1p(d) - d) + 0.5 * std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi) - stirling;
}

LogPQ log_pq(double a, double x) {
  require_pair(a, x);
  const double inf = std::numeric_limits<double>::infinity();
  if (x == 0.0) return {-inf, 0.0};
  if (std::isinf(x)) return {0.0, -inf};
  const double prefix = log_gamma_prefix(a, x);
  if (x < a + 1.0) {
    const double lp = prefix + log_gamma_series(a, x);
    const double p = std::exp(lp);
    if (p < 0.9) return {lp, std::log1p(-p)};
    const double lq = prefix + log_upper_gamma_cf(a, x);
    return {std::log1p(-std::exp(lq)), lq};
  }
  const double lq = prefix + log_upper_gamma_cf(a, x);
  const double q = std::exp(lq);
  if (q < 0.9) return {std::log1p(-q), lq};
  const double lp = prefix + log_gamma_series(a, x);
  return {lp, std::log1p(-std::exp(lp))};
}

}  // namespace

double phi(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double log_phi(double x) {
  if (x < 5.0) return std::log(phi(x));
  const double u = x / std::numbers::sqrt2;
  return std::log(0.5 * erfcx_scaled(u)) - u * u;
}

double erfcx_scaled(double x) {
  if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx_scaled(-x);
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  return erfcx_cf(x);
}

double log_erfcx_scaled(double x) {
  if (x < 0.0) return x * x + std::log(std::erfc(x));
  return std::log(erfcx_scaled(x));
}

double reg_gamma_lower(double a, double x) { return std::exp(log_pq(a, x).log_p); }

double reg_gamma_upper(double a, double x) { return std::exp(log_pq(a, x).log_q); }

double log_lower_gamma(double a, double x) { return log_pq(a, x).log_p + std::lgamma(a); }

double log_upper_gamma(double a, double x) { return log_pq(a, x).log_q + std::lgamma(a); }

double log_upper_gamma_general(double s, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_upper_gamma_general: x must be > 0");
  if (!std::isfinite(s)) throw DomainError("log_upper_gamma_general: s must be finite");
  if (s > 0.0) return log_upper_gamma(s, x);
  return s * std::log(x) - x + log_upper_gamma_cf(s, x);
}

}  // namespace confgas
