#include "confgas/ward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "confgas/error.hpp"
#include "confgas/quadrature.hpp"
#include "confgas/specfun.hpp"

namespace confgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGaussReach = 12.0;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

quad::Options tight() {
  quad::Options o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-12;
  return o;
}

void check_support(const std::vector<Interval>& e) {
  for (const auto& iv : e)
    if (!std::isfinite(iv.hi) || !(iv.hi > iv.lo))
      throw PreconditionError("edge profile support needs nonempty intervals with finite upper ends");
}

// int over E intersected with [center - reach, center + reach] of f.
template <class F>
double integrate_over(const std::vector<Interval>& e, double center, F&& f) {
  double total = 0.0;
  for (const auto& iv : e) {
    const double a = std::max(iv.lo, center - kGaussReach);
    const double b = std::min(iv.hi, center + kGaussReach);
    if (b > a) total += quad::integrate(f, a, b, tight()).value;
  }
  return total;
}

}  // namespace

EdgeProfileSpec EdgeProfileSpec::indicator_over_phi(double c, std::vector<Interval> e, double scale) {
  check_support(e);
  const ConfinementParam cp = ConfinementParam::finite(c);
  return {cp, [cp, scale](double xi) { return scale / confinement_fn(xi, cp); }, std::move(e)};
}

EdgeProfileSpec EdgeProfileSpec::standard(double c, double c0) {
  return indicator_over_phi(c, {{-kInf, c0}});
}

EdgeProfileSpec EdgeProfileSpec::plain_indicator(double c, std::vector<Interval> e) {
  check_support(e);
  return {ConfinementParam::finite(c), [](double) { return 1.0; }, std::move(e)};
}

double EdgeProfileSpec::S(double z) const {
  return kInvSqrt2Pi *
         integrate_over(support, z, [&](double xi) { return std::exp(-0.5 * (xi - z) * (xi - z)) * s(xi); });
}

double EdgeProfileSpec::dS(double z) const {
  return kInvSqrt2Pi * integrate_over(support, z, [&](double xi) {
           return (xi - z) * std::exp(-0.5 * (xi - z) * (xi - z)) * s(xi);
         });
}

double gaussian_identity_residual(double xi, double c) {
  if (!(std::abs(xi) <= 8.0)) throw PreconditionError("gaussian_identity_residual: |xi| > 8");
  const ConfinementParam cp = ConfinementParam::finite(c);
  auto logf = [&](double u) {
    const double up = std::max(u, 0.0);
    return -2.0 * (u - 0.5 * xi) * (u - 0.5 * xi) + 2.0 * (1.0 - c) * up * up;
  };
  const double peak = xi < 0.0 ? 0.5 * xi : 0.5 * xi / c;
  const double width = xi < 0.0 ? 0.5 : 0.5 / std::sqrt(c);
  const double br[] = {0.0};
  quad::Options o;
  o.rel_tol = 1e-14;
  const double lhs = quad::log_integrate(logf, -kInf, kInf, peak, width, br, o) +
                     0.5 * std::log(2.0 / std::numbers::pi);
  return std::abs(std::expm1(lhs - log_confinement_fn(xi, cp)));
}

double mass_one_residual(double x, const EdgeProfileSpec& spec) {
  const double z = 2.0 * x;
  const double lhs = kInvSqrt2Pi * integrate_over(spec.support, z, [&](double xi) {
                       const double sv = spec.s(xi);
                       return std::exp(-0.5 * (xi - z) * (xi - z)) * sv * sv * confinement_fn(xi, spec.c);
                     });
  const double rhs = spec.S(z);
  return std::abs(lhs - rhs) / rhs;
}

double ward_L1(double x, const EdgeProfileSpec& spec) {
  // T(eta) = int_{xi > eta} s(xi) Phi_c(xi) dxi over the support
  auto tail = [&](double eta) {
    double t = 0.0;
    for (const auto& iv : spec.support) {
      const double a = std::max(iv.lo, eta);
      if (iv.hi > a)
        t += quad::integrate([&](double xi) { return spec.s(xi) * confinement_fn(xi, spec.c); }, a,
                             iv.hi, tight())
                 .value;
    }
    return t;
  };
  return -kInvSqrt2Pi * integrate_over(spec.support, x, [&](double eta) {
           return std::exp(-0.5 * (eta - x) * (eta - x)) * spec.s(eta) * tail(eta);
         });
}

double ward_residual(double x, const EdgeProfileSpec& spec, double c0) {
  const double s = spec.S(x), ds = spec.dS(x);
  const double l1 = ward_L1(x, spec);
  return std::abs(l1 - ds - (x - c0) * s) / (std::abs(ds) + std::abs(x - c0) * s + s);
}

double TailChain::ratio() const { return std::exp(log_e - log_asymptote); }

TailChain tail_constant_chain(double r, const EdgeProfileSpec& spec) {
  if (!(r >= 5.0)) throw PreconditionError("tail_constant_chain: r must be >= 5");
  if (!spec.c.is_finite()) throw PreconditionError("tail_constant_chain: finite c required");
  const double c = spec.c.value;
  const double log_sqrt2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  auto logf = [&](double s) {
    const ScaledValue b = b_profile_scaled(cplx(s, 0.0), spec.c);
    return 0.5 * (1.0 - c) * s * s + log_sqrt2pi + b.log_scale + std::log(b.mantissa.real());
  };
  TailChain out;
  out.log_e = quad::log_integrate(logf, r, kInf, r, 1.0 / (c * r));
  out.log_asymptote = -0.5 * c * r * r - std::log(c * confinement_fn(0.0, spec.c) * r * r);
  return out;
}

double tail_f(double v, double c) {
  const ConfinementParam cp = ConfinementParam::finite(c);
  if (v == 0.0) return 0.0;
  auto g = [&](double xi) { return std::exp((1.0 - c) * xi * xi / (2.0 * c) - log_confinement_fn(xi, cp)); };
  const double a = -c * v;
  return a < 0.0 ? quad::integrate(g, a, 0.0, tight()).value : -quad::integrate(g, 0.0, a, tight()).value;
}

double tail_f1(double v, double c) {
  const ConfinementParam cp = ConfinementParam::finite(c);
  const double xi = -c * v;
  return c * std::exp((1.0 - c) * xi * xi / (2.0 * c) - log_confinement_fn(xi, cp));
}

}  // namespace confgas
