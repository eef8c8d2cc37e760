#pragma once

// Radially symmetric external potentials Q(r), their droplets (disks of
// radius rho_tau), obstacle functions and the modified potential Q^(c).

#include <functional>
#include <limits>
#include <string>

namespace confgas {

class RadialPotential {
 public:
  using Fn = std::function<double(double)>;

  RadialPotential(std::string name, Fn q, Fn dq, Fn d2q,
                  double domain_max = std::numeric_limits<double>::infinity());

  /// Q(r) = r^2, the Ginibre potential.
  static RadialPotential ginibre();
  /// Q(r) = alpha * r^p.
  static RadialPotential monomial(double p, double alpha = 1.0);

  double Q(double r) const;
  double dQ(double r) const;
  double d2Q(double r) const;
  /// (Q'' + Q'/r) / 4, a quarter of the usual Laplacian.
  double laplacian(double r) const;
  double domain_max() const { return domain_max_; }
  const std::string& name() const { return name_; }

  /// Throws ValidationError unless r Q'(r) is increasing, Q grows faster
  /// than 2 log r, and the Laplacian is positive at the unit-mass droplet edge.
  void validate() const;

 private:
  void check_domain(double r) const;

  std::string name_;
  Fn q_, dq_, d2q_;
  double domain_max_;
};

/// Root of rho Q'(rho) / 2 = tau (mass of the disk under the equilibrium measure).
double droplet_radius(double tau, const RadialPotential& p);

/// Radial obstacle function: Q inside rho_tau, Q(rho_tau) + 2 tau log(r / rho_tau) outside.
double obstacle(double r, double tau, const RadialPotential& p);
/// V_tau(r) = Q(rho_tau) + 2 tau log(r / rho_tau), the harmonic continuation.
double harmonic_continuation(double r, double tau, const RadialPotential& p);

/// Q^(c) = c Q + (1 - c) Qcheck_1 outside the droplet, Q inside. Caches rho_1.
class ModifiedPotential {
 public:
  ModifiedPotential(RadialPotential p, double c);

  double value(double r) const;
  /// r * d/dr Q^(c)(r).
  double r_deriv(double r) const;
  double c() const { return c_; }
  double rho1() const { return rho1_; }
  const RadialPotential& base() const { return p_; }

 private:
  RadialPotential p_;
  double c_, rho1_, q_rho1_;
};

double modified_potential(double r, double c, const RadialPotential& p);

/// (Q - V_tau)(rho_tau + v) - 2 Laplacian(rho_tau) v^2, expected O(v^3).
double boundary_expansion_check(const RadialPotential& p, double tau, double v);

/// Centered difference of tau -> rho_tau minus 1 / (2 rho_tau Laplacian(rho_tau)).
double growth_speed_check(const RadialPotential& p, double tau, double h = 1e-3);

/// rho_1 / rho_tau - (1 + (1 - tau) / (2 rho_tau^2 Laplacian(rho_tau))), expected O((1-tau)^2).
double rtau_residual(const RadialPotential& p, double tau);

/// (Q - Qcheck_1)(rho_1 + x / sqrt(n Laplacian(rho_1))) divided by 2 x^2 / n.
double obstacle_gap_ratio(const RadialPotential& p, double n, double x);

/// Equilibrium mass of the annulus rho_tau < r < rho_tau2, 2 int Laplacian(r) r dr.
double annulus_mass(const RadialPotential& p, double tau, double tau2);

}  // namespace confgas
