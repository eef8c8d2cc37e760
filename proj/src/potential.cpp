#include "confgas/potential.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "confgas/error.hpp"
#include "confgas/quadrature.hpp"

namespace confgas {

RadialPotential::RadialPotential(std::string name, Fn q, Fn dq, Fn d2q, double domain_max)
    : name_(std::move(name)), q_(std::move(q)), dq_(std::move(dq)), d2q_(std::move(d2q)),
      domain_max_(domain_max) {
  if (!q_ || !dq_ || !d2q_) throw ValidationError("RadialPotential: missing function");
  if (!(domain_max_ > 0.0)) throw ValidationError("RadialPotential: domain_max must be positive");
}

RadialPotential RadialPotential::ginibre() {
  return {"ginibre", [](double r) { return r * r; }, [](double r) { return 2.0 * r; },
          [](double) { return 2.0; }};
}

RadialPotential RadialPotential::monomial(double p, double alpha) {
  if (!(p > 0.0) || !(alpha > 0.0)) throw ValidationError("monomial potential needs p > 0, alpha > 0");
  return {"monomial", [=](double r) { return alpha * std::pow(r, p); },
          [=](double r) { return alpha * p * std::pow(r, p - 1.0); },
          [=](double r) { return alpha * p * (p - 1.0) * std::pow(r, p - 2.0); }};
}

void RadialPotential::check_domain(double r) const {
  if (!(r >= 0.0) || r > domain_max_)
    throw DomainError("radial potential evaluated outside [0, domain_max]");
}

double RadialPotential::Q(double r) const {
  check_domain(r);
  return q_(r);
}
double RadialPotential::dQ(double r) const {
  check_domain(r);
  return dq_(r);
}
double RadialPotential::d2Q(double r) const {
  check_domain(r);
  return d2q_(r);
}
double RadialPotential::laplacian(double r) const { return 0.25 * (d2Q(r) + dQ(r) / r); }

void RadialPotential::validate() const {
  const double top = std::isfinite(domain_max_) ? domain_max_ : 1e3;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 400; ++i) {
    const double r = top * std::pow(1e-4, 1.0 - i / 400.0);
    const double v = r * dQ(r);
    if (!(v > prev)) throw ValidationError(name_ + ": r Q'(r) is not strictly increasing");
    prev = v;
  }
  if (!std::isfinite(domain_max_)) {
    for (double r : {1e2, 1e3})
      if (!(Q(r) / (2.0 * std::log(r)) > 1.0))
        throw ValidationError(name_ + ": Q does not dominate 2 log r at infinity");
  }
  const double rho = droplet_radius(1.0, *this);
  if (!(laplacian(rho) > 0.0)) throw ValidationError(name_ + ": Laplacian vanishes at the droplet edge");
}

double droplet_radius(double tau, const RadialPotential& p) {
  if (!(tau > 0.0)) throw DomainError("droplet_radius: tau must be positive");
  auto g = [&](double r) { return 0.5 * r * p.dQ(r) - tau; };
  double lo = 1e-8, hi = std::min(1.0, p.domain_max());
  if (g(lo) >= 0.0) throw BracketError("droplet_radius: no sign change above r = 1e-8");
  while (g(hi) < 0.0) {
    if (hi >= p.domain_max()) throw BracketError("droplet_radius: no root below domain_max");
    hi = std::min(10.0 * hi, p.domain_max());
  }
  for (int i = 0; i < 200 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double step = g(r) / (2.0 * r * p.laplacian(r));
    const double next = std::clamp(r - step, lo, hi);
    if (std::abs(next - r) <= 1e-15 * r) {
      r = next;
      break;
    }
    r = next;
  }
  if (std::abs(g(r)) > 1e-12 * std::max(1.0, tau))
    throw ToleranceError("droplet_radius: residual above 1e-12");
  return r;
}

double harmonic_continuation(double r, double tau, const RadialPotential& p) {
  const double rho = droplet_radius(tau, p);
  return p.Q(rho) + 2.0 * tau * std::log(r / rho);
}

double obstacle(double r, double tau, const RadialPotential& p) {
  const double rho = droplet_radius(tau, p);
  if (r <= rho) return p.Q(r);
  return p.Q(rho) + 2.0 * tau * std::log(r / rho);
}

ModifiedPotential::ModifiedPotential(RadialPotential p, double c)
    : p_(std::move(p)), c_(c), rho1_(droplet_radius(1.0, p_)), q_rho1_(p_.Q(rho1_)) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("modified potential: c must be positive");
}

double ModifiedPotential::value(double r) const {
  if (r <= rho1_) return p_.Q(r);
  return c_ * p_.Q(r) + (1.0 - c_) * (q_rho1_ + 2.0 * std::log(r / rho1_));
}

double ModifiedPotential::r_deriv(double r) const {
  if (r <= rho1_) return r * p_.dQ(r);
  return c_ * r * p_.dQ(r) + 2.0 * (1.0 - c_);
}

double modified_potential(double r, double c, const RadialPotential& p) {
  return ModifiedPotential(p, c).value(r);
}

double boundary_expansion_check(const RadialPotential& p, double tau, double v) {
  const double rho = droplet_radius(tau, p);
  if (std::abs(v) > 0.1 * rho) throw PreconditionError("boundary_expansion_check: |v| > 0.1 rho_tau");
  const double r = rho + v;
  const double gap = p.Q(r) - p.Q(rho) - 2.0 * tau * std::log(r / rho);
  return gap - 2.0 * p.laplacian(rho) * v * v;
}

double growth_speed_check(const RadialPotential& p, double tau, double h) {
  if (!(tau - h > 0.0)) throw PreconditionError("growth_speed_check: tau - h must be positive");
  const double slope = (droplet_radius(tau + h, p) - droplet_radius(tau - h, p)) / (2.0 * h);
  const double rho = droplet_radius(tau, p);
  return slope - 1.0 / (2.0 * rho * p.laplacian(rho));
}

double rtau_residual(const RadialPotential& p, double tau) {
  const double rho = droplet_radius(tau, p);
  const double rho1 = droplet_radius(1.0, p);
  return rho1 / rho - (1.0 + (1.0 - tau) / (2.0 * rho * rho * p.laplacian(rho)));
}

double obstacle_gap_ratio(const RadialPotential& p, double n, double x) {
  if (!(x > 0.0)) throw PreconditionError("obstacle_gap_ratio: x must be positive");
  const double rho = droplet_radius(1.0, p);
  const double r = rho + x / std::sqrt(n * p.laplacian(rho));
  const double gap = p.Q(r) - p.Q(rho) - 2.0 * std::log(r / rho);
  return gap / (2.0 * x * x / n);
}

double annulus_mass(const RadialPotential& p, double tau, double tau2) {
  const double a = droplet_radius(tau, p), b = droplet_radius(tau2, p);
  auto f = [&](double r) { return 2.0 * p.laplacian(r) * r; };
  return quad::integrate(f, a, b).value;
}

}  // namespace confgas
