#include "confgas/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "confgas/error.hpp"
#include "confgas/quadrature.hpp"
#include "confgas/specfun.hpp"

namespace confgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// Solve n * r Q^(c)'(r) = target for log r; r Q^(c)' is increasing.
double log_radius_for(const ModifiedPotential& q, double n, double target) {
  const double top = std::log(q.base().domain_max());
  double lo = -60.0, hi = 1.0;
  while (n * q.r_deriv(std::exp(hi)) < target) {
    hi += 2.0;
    if (hi > top) return top;
    if (hi > 700.0) throw BracketError("saddle search escaped to infinity");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (n * q.r_deriv(std::exp(mid)) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

quad::Options radial_options() {
  quad::Options o;
  o.rel_tol = 1e-13;
  o.window_drop = 72.0;  // twelve Gaussian widths
  return o;
}

double gaussian_width(const ModifiedPotential& q, double n, double s) {
  const double r = std::exp(s);
  double curv = 4.0 * n * r * r * q.base().laplacian(r);
  if (r > q.rho1()) curv *= q.c();
  return 1.0 / std::sqrt(std::max(curv, 1e-300));
}

void require_degree(int j, const EnsembleModel& m) {
  if (j < 0 || j >= m.n) throw PreconditionError("degree outside [0, n)");
}

}  // namespace

double EnsembleModel::chart_radius(double x) const { return rho1() + x / std::sqrt(n * lap1); }

double log_radial_norm(int n, const ModifiedPotential& q, int j) {
  const double k = 2.0 * j + 2.0;
  auto logf = [&](double s) { return k * s - n * q.value(std::exp(s)) + std::numbers::ln2; };
  const double peak = log_radius_for(q, n, k);
  const double br[] = {std::log(q.rho1())};
  return quad::log_integrate(logf, -kInf, std::log(q.base().domain_max()), peak,
                             gaussian_width(q, n, peak), br, radial_options());
}

EnsembleModel build_ensemble(int n, double c, const RadialPotential& p) {
  if (n < 2) throw DomainError("build_ensemble: n must be >= 2");
  ModifiedPotential q(p, c);
  const double lap1 = p.laplacian(q.rho1());
  std::vector<double> norms(n);
  for (int j = 0; j < n; ++j) {
    try {
      norms[j] = log_radial_norm(n, q, j);
    } catch (const ToleranceError& e) {
      throw ToleranceError("norm quadrature failed at j=" + std::to_string(j) + ": " + e.what());
    }
  }
  return EnsembleModel{n, std::move(q), lap1, std::move(norms)};
}

EnsembleModel ensemble_from_ginibre(const GinibreModel& g) {
  return EnsembleModel{g.n, ModifiedPotential(RadialPotential::ginibre(), g.c.value), 1.0,
                       g.log_norms};
}

double saddle_radius(const EnsembleModel& model, int j) {
  require_degree(j, model);
  if (j == 0) return 0.0;
  return std::exp(log_radius_for(model.q, model.n, 2.0 * j));
}

double log_partial_one_point(double r, const EnsembleModel& model, int j_lo, int j_hi) {
  if (!(r >= 0.0)) throw DomainError("one-point function: radius must be >= 0");
  j_lo = std::max(j_lo, 0);
  j_hi = std::min(j_hi, model.n);
  if (j_lo >= j_hi) return -kInf;
  const double weight = -model.n * model.q.value(r);
  if (r == 0.0) return j_lo == 0 ? weight - model.log_norms[0] : -kInf;
  const double lr = std::log(r);
  double mx = -kInf;
  for (int j = j_lo; j < j_hi; ++j) mx = std::max(mx, 2.0 * j * lr - model.log_norms[j]);
  double sum = 0.0;
  for (int j = j_lo; j < j_hi; ++j) sum += std::exp(2.0 * j * lr - model.log_norms[j] - mx);
  return weight + mx + std::log(sum);
}

double one_point_function(double r, const EnsembleModel& model) {
  return std::exp(log_partial_one_point(r, model, 0, model.n));
}

double rescaled_one_point(double x, const EnsembleModel& model) {
  const double r = model.chart_radius(x);
  return std::exp(log_partial_one_point(r, model, 0, model.n) - std::log(model.n * model.lap1));
}

int boundary_block_width(int n) {
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) * std::log(n)));
}

double truncated_boundary_density(double r, const EnsembleModel& model, std::optional<int> m_n) {
  const double scale = std::sqrt(model.n * model.lap1);
  if (std::abs(r - model.rho1()) * scale > kBeltHalfWidth)
    throw PreconditionError("truncated_boundary_density: radius outside the boundary belt");
  const int m = m_n.value_or(std::max(0, model.n - boundary_block_width(model.n)));
  return std::exp(log_partial_one_point(r, model, m, model.n) - std::log(model.n * model.lap1));
}

double QuasiPolynomial::log_weighted_sq(double r, const EnsembleModel& model) const {
  return 2.0 * log_amplitude + 2.0 * j * std::log(r / rho_tau) - n * model.q.value(r);
}

QuasiPolynomial quasipoly(int j, const EnsembleModel& model) {
  const int n = model.n;
  const double lowest = n - std::sqrt(static_cast<double>(n)) * std::log(n);
  if (j < std::max(1.0, std::ceil(lowest)) || j > n - 1)
    throw PreconditionError("quasipoly: degree " + std::to_string(j) + " outside [n - n delta_n, n - 1]");
  QuasiPolynomial f;
  f.j = j;
  f.n = n;
  f.tau = static_cast<double>(j) / n;
  f.rho_tau = droplet_radius(f.tau, model.q.base());
  f.lap_tau = model.q.base().laplacian(f.rho_tau);
  f.xi = (j - n) / (std::sqrt(static_cast<double>(n)) * f.rho_tau * std::sqrt(f.lap_tau));
  f.re_h = 0.5 * std::log(f.lap_tau) - log_confinement_fn(f.xi, model.confinement());
  f.log_amplitude = 0.25 * std::log(n / (2.0 * std::numbers::pi)) - 0.5 * std::log(f.rho_tau) +
                    0.5 * n * model.q.base().Q(f.rho_tau) + 0.5 * f.re_h;
  return f;
}

double Cutoff::log_value(double r, double rho_tau) const {
  const double t = (r / rho_tau - rho0) / delta;
  if (t <= 0.0) return -kInf;
  if (t >= 1.0) return 0.0;
  const double a = -1.0 / t, b = -1.0 / (1.0 - t);
  return a - log_add(a, b);
}

namespace {

// log int_{r in (lo, hi)} chi^2 |F|^2 exp(-n Q^(c)) 2 r dr, in the variable s = log r.
double log_cut_mass(const QuasiPolynomial& f, const EnsembleModel& model, const Cutoff& chi,
                    double s_lo, double s_hi) {
  auto logf = [&](double s) {
    const double r = std::exp(s);
    const double lc = chi.log_value(r, f.rho_tau);
    if (lc == -kInf) return -kInf;
    return std::numbers::ln2 + 2.0 * s + 2.0 * lc + f.log_weighted_sq(r, model);
  };
  const double peak = log_radius_for(model.q, model.n, 2.0 * f.j + 2.0);
  const double br[] = {std::log(model.rho1()), std::log(chi.rho0 * f.rho_tau),
                       std::log((chi.rho0 + chi.delta) * f.rho_tau)};
  return quad::log_integrate(logf, s_lo, s_hi, peak, gaussian_width(model.q, model.n, peak), br,
                             radial_options());
}

}  // namespace

double check_P1(int j, const EnsembleModel& model, const Cutoff& chi) {
  const QuasiPolynomial f = quasipoly(j, model);
  const double lm = log_cut_mass(f, model, chi, std::log(chi.rho0 * f.rho_tau),
                                 std::log(model.q.base().domain_max()));
  return std::abs(std::expm1(lm));
}

P2Report check_P2(int j, int ell, const EnsembleModel& model, const Cutoff& chi, double m) {
  if (!(ell >= 0 && ell < j)) throw PreconditionError("check_P2: need 0 <= ell < j");
  const QuasiPolynomial f = quasipoly(j, model);
  const double delta_n = std::log(model.n) / std::sqrt(static_cast<double>(model.n));
  const double inner = 1.0 - m * delta_n, outer = 1.0 + m * delta_n;
  double lt = -kInf;
  if (inner > chi.rho0)
    lt = log_cut_mass(f, model, chi, std::log(chi.rho0 * f.rho_tau), std::log(inner * f.rho_tau));
  const double top = std::log(model.q.base().domain_max());
  if (std::log(outer * f.rho_tau) < top)
    lt = log_add(lt, log_cut_mass(f, model, chi, std::log(outer * f.rho_tau), top));
  P2Report rep;
  rep.annulus = 0.0;
  rep.relative_tail = std::exp(0.5 * lt);
  rep.log_norm_ell = 0.5 * model.log_norms[ell];
  return rep;
}

double check_pointwise(int j, const EnsembleModel& model, double x) {
  const int n = model.n;
  const double window = std::sqrt(std::log(std::log(static_cast<double>(n))));
  if (!(std::abs(x) <= window))
    throw PreconditionError("check_pointwise: |x| exceeds sqrt(log log n)");
  const QuasiPolynomial f = quasipoly(j, model);
  const double r = f.rho_tau + x / std::sqrt(static_cast<double>(n));
  const double log_p = j * std::log(r) - 0.5 * model.log_norms[j];
  const double log_f = f.log_amplitude + j * std::log(r / f.rho_tau);
  return std::abs(std::expm1(log_p - log_f));
}

}  // namespace confgas
