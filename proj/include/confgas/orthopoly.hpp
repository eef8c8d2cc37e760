#pragma once

// Finite-n radial ensembles with weight exp(-n Q^(c)): monomial norms,
// 1-point functions, boundary truncation and the quasipolynomial diagnostics.

#include <optional>
#include <vector>

#include "confgas/ginibre.hpp"
#include "confgas/potential.hpp"
#include "confgas/profiles.hpp"

namespace confgas {

struct EnsembleModel {
  int n = 0;
  ModifiedPotential q;
  double lap1 = 0.0;              ///< Laplacian at rho_1
  std::vector<double> log_norms;  ///< log h_j, h_j = 2 int r^(2j+1) exp(-n Q^(c)) dr

  double c() const { return q.c(); }
  double rho1() const { return q.rho1(); }
  ConfinementParam confinement() const { return ConfinementParam::finite(q.c()); }
  /// Radius rho_1 + x / sqrt(n Laplacian(rho_1)) of the boundary chart.
  double chart_radius(double x) const;
};

/// Norms by log-space quadrature around the saddle of (2j+2) log r - n Q^(c)(r).
EnsembleModel build_ensemble(int n, double c, const RadialPotential& p);
/// Ginibre potential with norms taken from a closed-form model.
EnsembleModel ensemble_from_ginibre(const GinibreModel& g);

/// log h_j for one degree.
double log_radial_norm(int n, const ModifiedPotential& q, int j);
/// Maximizer of 2j log r - n Q^(c)(r).
double saddle_radius(const EnsembleModel& model, int j);

/// log of exp(2j log r - n Q^(c)(r) - log h_j) summed over j in [j_lo, j_hi).
double log_partial_one_point(double r, const EnsembleModel& model, int j_lo, int j_hi);
/// Full 1-point function R_n(r) = sum_{j<n} |w_{j,n}|^2.
double one_point_function(double r, const EnsembleModel& model);
/// R_n / (n Laplacian(rho_1)) in the boundary chart.
double rescaled_one_point(double x, const EnsembleModel& model);

/// floor(sqrt(n) log n), the width n delta_n of the retained degree block.
int boundary_block_width(int n);
/// Half width of the belt around rho_1, in units of 1/sqrt(n Laplacian(rho_1)).
inline constexpr double kBeltHalfWidth = 6.0;
/// Rescaled sum over j >= m_n only; m_n defaults to n - floor(sqrt(n) log n).
double truncated_boundary_density(double r, const EnsembleModel& model,
                                  std::optional<int> m_n = std::nullopt);

struct QuasiPolynomial {
  int j = 0, n = 0;
  double tau = 0.0, rho_tau = 0.0, lap_tau = 0.0;
  double xi = 0.0;
  double re_h = 0.0;
  double log_amplitude = 0.0;

  /// log |F(r)|^2 exp(-n Q^(c)(r)).
  double log_weighted_sq(double r, const EnsembleModel& model) const;
};

QuasiPolynomial quasipoly(int j, const EnsembleModel& model);

/// Radial cutoff: 0 below rho0 rho_tau, 1 above (rho0 + delta) rho_tau.
struct Cutoff {
  double rho0 = 0.8;
  double delta = 0.05;
  double log_value(double r, double rho_tau) const;
};

/// |int chi^2 |F|^2 exp(-n Q^(c)) dA - 1|.
double check_P1(int j, const EnsembleModel& model, const Cutoff& chi = {});

struct P2Report {
  double annulus = 0.0;        ///< angular integral of e^{i(l-j)theta}: exactly zero
  double relative_tail = 0.0;  ///< Cauchy-Schwarz bound over |r/rho_tau - 1| > M delta_n, per ||zeta^l||
  double log_norm_ell = 0.0;   ///< log ||zeta^l||
  /// |<chi zeta^l, F>| / ||zeta^l|| bounded by annulus + tail.
  double relative() const { return annulus + relative_tail; }
};

P2Report check_P2(int j, int ell, const EnsembleModel& model, const Cutoff& chi = {},
                  double m = 1.0);

/// | |p_j(zeta)| / |F_j(zeta)| - 1 | at radius rho_tau + x / sqrt(n).
double check_pointwise(int j, const EnsembleModel& model, double x);

}  // namespace confgas
