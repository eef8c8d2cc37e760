#include "confgas/profiles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "confgas/error.hpp"
#include "confgas/quadrature.hpp"
#include "confgas/specfun.hpp"

namespace confgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// (1 - c) with the limit modes mapped to c = 0 and c = infinity.
double excess_weight(const ConfinementParam& c) {
  switch (c.mode) {
    case ConfinementParam::Mode::ultraweak: return 1.0;
    case ConfinementParam::Mode::hard: return 0.0;
    default: return 1.0 - c.value;
  }
}

}  // namespace

ConfinementParam ConfinementParam::finite(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("confinement parameter must be a positive finite real");
  return {Mode::finite, c};
}

ConfinementParam ConfinementParam::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "inf" || s == "infinity" || s == "+inf" || s == "hard") return hard();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v) || v < 0.0)
    throw ValidationError("cannot parse confinement value '" + std::string(text) + "'");
  if (v == 0.0) return ultraweak();
  return finite(v);
}

std::string ConfinementParam::str() const {
  switch (mode) {
    case Mode::ultraweak: return "0";
    case Mode::hard: return "inf";
    default: {
      std::ostringstream os;
      os.precision(12);
      os << value;
      return os.str();
    }
  }
}

double log_confinement_fn(double t, const ConfinementParam& c) {
  if (!std::isfinite(t)) throw DomainError("confinement_fn: t must be finite");
  switch (c.mode) {
    case ConfinementParam::Mode::hard: return log_phi(t);
    case ConfinementParam::Mode::ultraweak:
      if (t >= 0.0) throw DomainError("ultraweak confinement function is defined for t < 0 only");
      return log_add(log_phi(t), -0.5 * t * t - kLogSqrt2Pi - std::log(-t));
    default: break;
  }
  const double cv = c.value;
  if (cv == 1.0) return 0.0;
  const double second = -std::log(2.0 * std::sqrt(cv)) +
                        log_erfcx_scaled(-t / std::sqrt(2.0 * cv)) - 0.5 * t * t;
  return log_add(log_phi(t), second);
}

double confinement_fn(double t, const ConfinementParam& c) {
  return std::exp(log_confinement_fn(t, c));
}

ScaledValue b_profile_scaled(cplx z, const ConfinementParam& c) {
  const double X = z.real(), Y = z.imag();
  if (!std::isfinite(X) || !std::isfinite(Y)) throw DomainError("b_profile: z must be finite");
  const bool ultraweak = c.mode == ConfinementParam::Mode::ultraweak;
  auto logg = [&](double t) {
    if (t >= 0.0 && ultraweak) return -kInf;
    return -0.5 * (X - t) * (X - t) - log_confinement_fn(t, c);
  };
  const double lo = std::min(X, 0.0) - 12.0;
  const double peak = quad::argmax_unimodal(logg, lo, 0.0);
  const quad::Window w = quad::find_window(logg, -kInf, 0.0, peak, 1.0);
  std::vector<double> br{w.left, w.right};
  if (peak > w.left && peak < w.right) br.insert(br.begin() + 1, peak);
  auto f = [&](double t) {
    const double v = logg(t) - w.ref;
    if (v < -745.0) return cplx(0.0);
    return std::exp(v) * std::polar(1.0, -Y * (X - t));
  };
  quad::Options opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-13;
  const auto r = quad::integrate(f, std::span<const double>(br), opt);
  return {w.ref - kLogSqrt2Pi, r.value};
}

cplx b_profile(cplx z, const ConfinementParam& c) {
  const ScaledValue s = b_profile_scaled(z, c);
  const double y = z.imag();
  return std::exp(s.log_scale + 0.5 * y * y) * s.mantissa;
}

double log_density(cplx z, const ConfinementParam& c) {
  const double x = z.real();
  if (c.mode == ConfinementParam::Mode::hard && x > 0.0) return -kInf;
  const ScaledValue s = b_profile_scaled(cplx(2.0 * x, 0.0), c);
  const double xp = std::max(x, 0.0);
  const double m = s.mantissa.real();
  if (!(m > 0.0)) return -kInf;
  return s.log_scale + std::log(m) + 2.0 * excess_weight(c) * xp * xp;
}

double density(cplx z, const ConfinementParam& c) { return std::exp(log_density(z, c)); }

cplx kernel(cplx z, cplx w, const ConfinementParam& c) {
  const double x = z.real(), y = z.imag(), u = w.real(), v = w.imag();
  if (c.mode == ConfinementParam::Mode::hard && (x > 0.0 || u > 0.0)) return 0.0;
  const ScaledValue s = b_profile_scaled(cplx(x + u, y - v), c);
  const double xp = std::max(x, 0.0), up = std::max(u, 0.0);
  const double mag = -0.5 * (x - u) * (x - u) + s.log_scale + excess_weight(c) * (xp * xp + up * up);
  return std::exp(mag) * std::polar(1.0, y * u - x * v) * s.mantissa;
}

double correlation_det(std::span<const cplx> points, const ConfinementParam& c) {
  const auto k = static_cast<Eigen::Index>(points.size());
  if (k < 1 || k > 12) throw PreconditionError("correlation_det: need 1 to 12 points");
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    m(i, i) = density(points[i], c);
    for (Eigen::Index j = 0; j < i; ++j) {
      m(i, j) = kernel(points[i], points[j], c);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m.partialPivLu().determinant().real();
}

ProfileCurve profile_curve(const ConfinementParam& c, std::span<const double> xs) {
  ProfileCurve out{c, {xs.begin(), xs.end()}, {}, 1e-12};
  out.values.reserve(xs.size());
  for (double x : xs) out.values.push_back(density(cplx(x, 0.0), c));
  return out;
}

}  // namespace confgas
