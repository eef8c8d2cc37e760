#pragma once

// Confined Ginibre ensemble, Q(zeta) = |zeta|^2, at finite n.

#include <vector>

#include "confgas/profiles.hpp"

namespace confgas {

enum class NormPath { closed_form, quadrature };

struct GinibreModel {
  int n = 0;
  ConfinementParam c;
  std::vector<double> log_norms;  ///< log ||zeta^j||^2, j = 0..n-1
  std::vector<NormPath> path;

  /// n Q^(c)(r) for Q = r^2 (unit-disk droplet).
  double n_modified_potential(double r) const;
};

/// Closed form through incomplete gammas. Throws ConvergenceError if the
/// continued fraction for the exterior term stalls.
double ginibre_log_norm_closed(int n, double c, int j);
/// log of 2 int_0^inf r^(2j+1) exp(-n Q^(c)(r)) dr by adaptive quadrature.
double ginibre_log_norm_quadrature(int n, double c, int j);

/// Closed form where it converges, quadrature otherwise. With `cross_check`
/// every closed-form entry is also integrated and a relative mismatch above
/// 1e-6 raises ToleranceError.
GinibreModel build_model(int n, double c, bool cross_check = true);

/// (1/n) K_n(zeta, zeta) at zeta = 1 + z / sqrt(n).
double rescaled_density(cplx z, const GinibreModel& model);
/// (1/n) K_n(zeta, eta) in the gauge of the monomial basis.
cplx rescaled_kernel(cplx z, cplx w, const GinibreModel& model);

}  // namespace confgas
