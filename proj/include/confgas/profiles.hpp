#pragma once

// Limiting edge profiles of the rescaled point field near the boundary:
// Phi_c, the convolution S = b_c, the 1-point intensity and the kernel.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confgas {

using cplx = std::complex<double>;

struct ConfinementParam {
  enum class Mode { ultraweak, finite, hard };
  Mode mode = Mode::finite;
  double value = 1.0;  ///< only meaningful for Mode::finite

  static ConfinementParam finite(double c);
  static ConfinementParam ultraweak() { return {Mode::ultraweak, 0.0}; }
  static ConfinementParam hard() { return {Mode::hard, 0.0}; }
  /// Accepts "inf"/"infinity", "0", or a positive real.
  static ConfinementParam parse(std::string_view text);

  bool is_finite() const { return mode == Mode::finite; }
  std::string str() const;
};

/// Phi_c(t). Ultraweak mode is only defined for t < 0.
double confinement_fn(double t, const ConfinementParam& c);
/// log Phi_c(t), overflow-free.
double log_confinement_fn(double t, const ConfinementParam& c);

/// S(z) carried as exp(log_scale + Im(z)^2/2) * mantissa so that wide
/// arguments neither overflow nor underflow.
struct ScaledValue {
  double log_scale;
  cplx mantissa;
};
ScaledValue b_profile_scaled(cplx z, const ConfinementParam& c);

/// b_c(z) = (1/sqrt(2 pi)) int_{-inf}^0 exp(-(z-t)^2/2) / Phi_c(t) dt.
cplx b_profile(cplx z, const ConfinementParam& c);

/// R(z) = b_c(2 Re z) exp(2 (1-c) (Re z)_+^2); zero right of the hard wall.
double density(cplx z, const ConfinementParam& c);
/// log R(z); -inf where the density vanishes.
double log_density(cplx z, const ConfinementParam& c);

/// K(z,w) = G(z,w) S(z + conj w) exp((1-c)((Re z)_+^2 + (Re w)_+^2)).
cplx kernel(cplx z, cplx w, const ConfinementParam& c);

/// det [K(p_i, p_j)] for 1..12 points.
double correlation_det(std::span<const cplx> points, const ConfinementParam& c);

struct ProfileCurve {
  ConfinementParam c;
  std::vector<double> abscissae;
  std::vector<double> values;
  double tolerance = 1e-12;
};

ProfileCurve profile_curve(const ConfinementParam& c, std::span<const double> xs);

}  // namespace confgas
