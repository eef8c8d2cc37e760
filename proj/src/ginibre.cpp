#include "confgas/ginibre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "confgas/error.hpp"
#include "confgas/quadrature.hpp"
#include "confgas/specfun.hpp"

namespace confgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(int n, double c) {
  if (n < 2) throw DomainError("ginibre: n must be >= 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ginibre: c must be positive and finite");
}

double n_qc(int n, double c, double r) {
  if (r <= 1.0) return n * r * r;
  return n * (c * r * r + (1.0 - c) * (1.0 + 2.0 * std::log(r)));
}

void check_chart(cplx z, int n) {
  if (std::abs(z) > 0.5 * std::sqrt(static_cast<double>(n)))
    throw PreconditionError("ginibre: |z| must not exceed sqrt(n)/2");
}

}  // namespace

double GinibreModel::n_modified_potential(double r) const { return n_qc(n, c.value, r); }

double ginibre_log_norm_closed(int n, double c, int j) {
  require(n, c);
  const double a = j + 1.0;
  const double inner = log_lower_gamma(a, n) - a * std::log(static_cast<double>(n));
  const double s = a - n * (1.0 - c);
  const double x = n * c;
  const double outer = -n * (1.0 - c) - s * std::log(x) + log_upper_gamma_general(s, x);
  const double hi = std::max(inner, outer), lo = std::min(inner, outer);
  return hi + std::log1p(std::exp(lo - hi));
}

double ginibre_log_norm_quadrature(int n, double c, int j) {
  require(n, c);
  // variable s = log r; the integrand r^(2j+2) e^(-nQ) is log-concave in s
  const double k = 2.0 * j + 2.0;
  auto logf = [&](double s) { return k * s - n_qc(n, c, std::exp(s)) + std::log(2.0); };
  // j < n puts the saddle r^2 = (j+1)/n inside the unit disk
  const double peak = 0.5 * std::log(k / (2.0 * n));
  const double width = 1.0 / std::sqrt(2.0 * k);
  const double breaks[] = {0.0};
  quad::Options opt;
  opt.rel_tol = 1e-13;
  return quad::log_integrate(logf, -kInf, kInf, peak, width, breaks, opt);
}

GinibreModel build_model(int n, double c, bool cross_check) {
  require(n, c);
  GinibreModel m;
  m.n = n;
  m.c = ConfinementParam::finite(c);
  m.log_norms.resize(n);
  m.path.resize(n);
  for (int j = 0; j < n; ++j) {
    try {
      m.log_norms[j] = ginibre_log_norm_closed(n, c, j);
      m.path[j] = NormPath::closed_form;
    } catch (const ConvergenceError&) {
      m.log_norms[j] = ginibre_log_norm_quadrature(n, c, j);
      m.path[j] = NormPath::quadrature;
      continue;
    }
    if (cross_check) {
      const double q = ginibre_log_norm_quadrature(n, c, j);
      if (std::abs(std::expm1(q - m.log_norms[j])) > 1e-6)
        throw ToleranceError("ginibre norm paths disagree at j=" + std::to_string(j));
    }
  }
  return m;
}

double rescaled_density(cplx z, const GinibreModel& model) {
  check_chart(z, model.n);
  const double sn = std::sqrt(static_cast<double>(model.n));
  const double r = std::abs(1.0 + z / sn);
  const double lr = std::log(r);
  const double nq = model.n_modified_potential(r);
  double mx = -kInf;
  for (int j = 0; j < model.n; ++j) mx = std::max(mx, 2.0 * j * lr - model.log_norms[j]);
  double sum = 0.0;
  for (int j = 0; j < model.n; ++j) sum += std::exp(2.0 * j * lr - model.log_norms[j] - mx);
  return std::exp(mx - nq + std::log(sum)) / model.n;
}

cplx rescaled_kernel(cplx z, cplx w, const GinibreModel& model) {
  check_chart(z, model.n);
  check_chart(w, model.n);
  const double sn = std::sqrt(static_cast<double>(model.n));
  const cplx zeta = 1.0 + z / sn, eta = 1.0 + w / sn;
  const double lz = std::log(std::abs(zeta)), lw = std::log(std::abs(eta));
  const double theta = std::arg(zeta) - std::arg(eta);
  const double weight =
      -0.5 * (model.n_modified_potential(std::abs(zeta)) + model.n_modified_potential(std::abs(eta)));
  double mx = -kInf;
  for (int j = 0; j < model.n; ++j) mx = std::max(mx, j * (lz + lw) - model.log_norms[j]);
  cplx sum = 0.0;
  for (int j = 0; j < model.n; ++j)
    sum += std::exp(j * (lz + lw) - model.log_norms[j] - mx) * std::polar(1.0, j * theta);
  return std::exp(mx + weight) * sum / static_cast<double>(model.n);
}

}  // namespace confgas
