#include "confgas/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "confgas/error.hpp"
#include "confgas/parallel.hpp"
#include "confgas/quadrature.hpp"
#include "confgas/rng.hpp"
#include "confgas/specfun.hpp"

namespace confgas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTableFloor = -46.0;          // degrees below this at lo_ get no table
constexpr double kTopSurvival = -36.8413614879; // log(1e-16)
constexpr int kNodesPerWidth = 16;

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// log densities are of size n, so the integrand itself carries ~n eps noise
quad::Options fine() {
  quad::Options o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-11;
  return o;
}

}  // namespace

double gamma_n(int n, double c, const RadialPotential& p) {
  if (n < 16) throw DomainError("gamma_n: n must be >= 16");
  const double rho = droplet_radius(1.0, p);
  const double lap = p.laplacian(rho);
  const double phi0 = confinement_fn(0.0, ConfinementParam::finite(c));
  const double log_cc = std::log(rho * std::sqrt(lap) / phi0);
  const double alt = std::log(rho * rho * lap / (phi0 * phi0));
  if (std::abs(alt - 2.0 * log_cc) > 1e-12)
    throw ToleranceError("gamma_n: the two forms of 2 log C_c disagree");
  return std::log(n / (2.0 * std::numbers::pi)) - 2.0 * std::log(std::log(n)) + 2.0 * log_cc;
}

double omega_from_radius(double r, const EnsembleModel& m, double gamma) {
  const double k = 4.0 * m.n * m.c() * m.lap1;
  return std::sqrt(k * gamma) * (r - m.rho1() - std::sqrt(gamma / k));
}

double radius_from_omega(double x, const EnsembleModel& m, double gamma) {
  const double rn = (std::sqrt(gamma) + x / std::sqrt(gamma)) / std::sqrt(m.c());
  return m.rho1() + rn / std::sqrt(4.0 * m.n * m.lap1);
}

ModulusLaws::ModulusLaws(EnsembleModel model, bool with_tables) : model_(std::move(model)) {
  const int n = model_.n;
  const auto& q = model_.q;
  saddle_.resize(n);
  const double top = std::min(std::log(q.base().domain_max()), 700.0);
  for (int j = 0; j < n; ++j) {
    const double target = 2.0 * j + 1.0;
    double lo = -60.0, hi = 1.0;
    while (hi < top && n * q.r_deriv(std::exp(hi)) < target) hi = std::min(hi + 2.0, top);
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
      const double mid = 0.5 * (lo + hi);
      (n * q.r_deriv(std::exp(mid)) < target ? lo : hi) = mid;
    }
    saddle_[j] = std::exp(0.5 * (lo + hi));
  }
  table_of_.assign(n, -1);
  const double w = 1.0 / std::sqrt(n * model_.lap1);
  lo_ = std::max(rho() - 10.0 * w, 0.05 * rho());
  if (!with_tables) return;

  log_s_lo_.resize(n);
  parallel_for(n, [&](std::size_t j) { log_s_lo_[j] = log_survival(static_cast<int>(j), lo_); });

  double r = std::max(saddle_[n - 1], lo_);
  while (log_survival(n - 1, r) > kTopSurvival) r += w;
  step_ = w / kNodesPerWidth;
  nodes_ = static_cast<std::size_t>(std::ceil((r - lo_) / step_)) + 1;
  hi_ = node(nodes_ - 1);

  std::vector<int> degrees;
  for (int j = 0; j < n; ++j)
    if (log_s_lo_[j] > kTableFloor) degrees.push_back(j);
  tables_.resize(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) { tables_[i] = build_table(degrees[i]); });
  for (std::size_t i = 0; i < degrees.size(); ++i) table_of_[degrees[i]] = static_cast<int>(i);
}

std::size_t ModulusLaws::tabled_degrees() const { return tables_.size(); }

double ModulusLaws::log_density(int j, double r) const {
  if (!(r > 0.0)) return -kInf;
  return std::numbers::ln2 + (2.0 * j + 1.0) * std::log(r) - model_.n * model_.q.value(r) -
         model_.log_norms[j];
}

double ModulusLaws::log_survival(int j, double r) const {
  if (!(r > 0.0)) return 0.0;
  const double rs = saddle_[j];
  const double ld = log_density(j, r);
  if (r >= rs) {
    // log-concave tail: S(r) <= exp(ld) / |ld'(r)|
    const double slope = ((2.0 * j + 1.0) - model_.n * model_.q.r_deriv(r)) / r;
    if (slope < 0.0 && ld - std::log(-slope) < -745.0) return -kInf;
  }
  auto f = [&](double t) { return log_density(j, t); };
  const double width = 0.5 / std::sqrt(model_.n * model_.q.base().laplacian(std::max(rs, 1e-8)));
  const double br[] = {rho()};
  return quad::log_integrate(f, r, model_.q.base().domain_max(), std::max(r, rs), width, br);
}

double ModulusLaws::log_interior(int j, double r) const {
  if (!(r > 0.0)) return -kInf;
  const double rs = saddle_[j];
  auto f = [&](double t) { return log_density(j, t); };
  const double width = 0.5 / std::sqrt(model_.n * model_.q.base().laplacian(std::max(rs, 1e-8)));
  const double br[] = {rho()};
  return quad::log_integrate(f, 0.0, r, std::min(r, rs), width, br);
}

double ModulusLaws::invert_exact(int j, double log_v) const {
  if (!(log_v < 0.0)) throw DomainError("invert_exact: survival level must be in (0,1)");
  const double w = 0.5 / std::sqrt(model_.n * model_.lap1);
  double a = saddle_[j], b = saddle_[j];
  // survival decreases in r: bracket log S(a) >= log_v >= log S(b)
  for (double step = w; log_survival(j, a) < log_v; step *= 2.0) {
    a = std::max(a - step, 0.0);
    if (a == 0.0) break;
  }
  for (double step = w; log_survival(j, b) > log_v; step *= 2.0) {
    b += step;
    if (b > model_.q.base().domain_max()) throw ToleranceError("invert_exact: no bracket");
  }
  double r = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double ls = log_survival(j, r);
    const double g = ls - log_v;
    (g > 0.0 ? a : b) = r;
    const double d = -std::exp(log_density(j, r) - ls);
    double next = (d < 0.0 && std::isfinite(g)) ? r - g / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - r) <= 1e-15 * r || b - a <= 1e-15 * b) return next;
    r = next;
  }
  throw ToleranceError("invert_exact: no convergence for degree " + std::to_string(j));
}

ModulusLaws::Table ModulusLaws::build_table(int j) const {
  Table t{j, std::vector<double>(nodes_), std::vector<double>(nodes_)};
  auto f = [&](double r) { return log_density(j, r); };
  t.log_s[nodes_ - 1] = log_survival(j, hi_);
  for (std::size_t k = nodes_ - 1; k-- > 0;) {
    const double a = node(k), b = node(k + 1);
    const double ref = f(std::clamp(saddle_[j], a, b));
    const double br[] = {a, std::clamp(rho(), a, b), b};
    const double cell =
        quad::integrate([&](double r) { return std::exp(f(r) - ref); }, br, fine()).value;
    t.log_s[k] = log_add(t.log_s[k + 1], ref + std::log(cell));
  }
  for (std::size_t k = 0; k < nodes_; ++k) t.dlog_s[k] = -std::exp(f(node(k)) - t.log_s[k]);
  if (std::abs(std::expm1(t.log_s[0] - log_s_lo_[j])) > 1e-9)
    throw ToleranceError("inverse-CDF table for degree " + std::to_string(j) +
                         " does not reproduce the survival at its lower end");
  return t;
}

double ModulusLaws::invert_table(const Table& t, double log_v) const {
  // log_s is decreasing; find k with log_s[k] >= log_v > log_s[k+1]
  std::size_t a = 0, b = nodes_ - 1;
  while (b - a > 1) {
    const std::size_t m = (a + b) / 2;
    (t.log_s[m] >= log_v ? a : b) = m;
  }
  const double h = step_;
  const double y0 = t.log_s[a], y1 = t.log_s[b], d0 = t.dlog_s[a] * h, d1 = t.dlog_s[b] * h;
  auto p = [&](double u) {
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * d1;
  };
  double ua = 0.0, ub = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double um = 0.5 * (ua + ub);
    (p(um) >= log_v ? ua : ub) = um;
  }
  return node(a) + 0.5 * (ua + ub) * h;
}

double ModulusLaws::log_survival_in_cell(const Table& t, std::size_t k, double r) const {
  const double b = node(k + 1);
  if (r >= b) return t.log_s[k + 1];
  auto f = [&](double s) { return log_density(t.j, s); };
  const double ref = f(std::clamp(saddle_[t.j], r, b));
  const double part =
      quad::integrate([&](double s) { return std::exp(f(s) - ref); }, r, b, fine()).value;
  return log_add(t.log_s[k + 1], ref + std::log(part));
}

double ModulusLaws::polish(const Table& t, double r, double log_v) const {
  for (int it = 0; it < 8; ++it) {
    const auto k = std::min(nodes_ - 2, static_cast<std::size_t>(std::max(0.0, (r - lo_) / step_)));
    const double ls = log_survival_in_cell(t, k, r);
    const double d = -std::exp(log_density(t.j, r) - ls);
    const double dr = -(ls - log_v) / d;
    r = std::clamp(r + dr, lo_, hi_);
    if (std::abs(dr) <= 1e-15 * r) break;
  }
  return r;
}

double ModulusLaws::draw_max(std::uint64_t seed, std::uint64_t replicate) const {
  if (tables_.empty() && nodes_ == 0) throw PreconditionError("draw_max: laws were built without tables");
  const int n = model_.n;
  struct Candidate {
    int table;
    double r, log_v;
  };
  std::vector<Candidate> cands;
  double best_exact = -kInf;
  double m = -kInf;
  for (int j = n - 1; j >= 0; --j) {
    const double lv = std::log(rng::uniform(seed, replicate, static_cast<std::uint32_t>(j)));
    if (lv > log_s_lo_[j]) continue;  // this radius lies below lo_
    const int ti = table_of_[j];
    if (ti < 0) {
      const double r = invert_exact(j, lv);
      best_exact = std::max(best_exact, r);
      m = std::max(m, r);
      continue;
    }
    const Table& t = tables_[ti];
    if (m >= lo_) {
      const auto k = std::min(nodes_ - 1, static_cast<std::size_t>((m - lo_) / step_));
      if (lv > t.log_s[k]) continue;  // radius below node k, hence below m
    }
    if (lv < t.log_s.back()) {
      const double r = invert_exact(j, lv);
      best_exact = std::max(best_exact, r);
      m = std::max(m, r);
      continue;
    }
    const double r = invert_table(t, lv);
    cands.push_back({ti, r, lv});
    m = std::max(m, r);
  }
  if (m == -kInf) {
    // every radius fell below the tables; invert all degrees exactly
    for (int j = 0; j < n; ++j) {
      const double lv = std::log(rng::uniform(seed, replicate, static_cast<std::uint32_t>(j)));
      m = std::max(m, invert_exact(j, lv));
    }
    return m;
  }
  double best = best_exact;
  for (const auto& cd : cands)
    if (cd.r >= m - step_) best = std::max(best, polish(tables_[cd.table], cd.r, cd.log_v));
  return best;
}

MaxModulusBatch sample_max_modulus(const ModulusLaws& laws, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw PreconditionError("sample_max_modulus: sample_count must be >= 1");
  const auto& m = laws.model();
  MaxModulusBatch batch;
  batch.n = m.n;
  batch.c = m.c();
  batch.seed = seed;
  batch.sample_count = sample_count;
  batch.gamma = gamma_n(m.n, m.c(), m.q.base());
  batch.omegas.resize(sample_count);
  parallel_for(sample_count, [&](std::size_t i) {
    batch.omegas[i] = omega_from_radius(laws.draw_max(seed, i), m, batch.gamma);
  });
  return batch;
}

double log_gap_probability(const ModulusLaws& laws, double r) {
  if (!(r > 0.0)) throw DomainError("gap_probability: r must be positive");
  const int n = laws.model().n;
  std::vector<double> terms(n);
  parallel_for(n, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double ls = laws.log_survival(j, r);
    terms[jj] = ls < std::log(0.5) ? std::log1p(-std::exp(ls)) : laws.log_interior(j, r);
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double gap_probability(const ModulusLaws& laws, double r) { return std::exp(log_gap_probability(laws, r)); }

TailSum tail_sum(const ModulusLaws& laws, double x) {
  const auto& m = laws.model();
  const double gamma = gamma_n(m.n, m.c(), m.q.base());
  const double r = radius_from_omega(x, m, gamma);
  const double cut = m.n - std::sqrt(static_cast<double>(m.n)) * std::log(m.n);
  std::vector<double> mass(m.n);
  parallel_for(m.n, [&](std::size_t j) { mass[j] = std::exp(laws.log_survival(static_cast<int>(j), r)); });
  TailSum out;
  for (int j = 0; j < m.n; ++j) {
    out.total += mass[j];
    out.sum_sq += mass[j] * mass[j];
    if (j <= cut) out.lower_block += mass[j];
  }
  return out;
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double ks_distance_gumbel(std::vector<double> sample) {
  if (sample.empty()) throw PreconditionError("ks_distance_gumbel: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double g = gumbel_cdf(sample[i]);
    d = std::max({d, (i + 1) / n - g, g - i / n});
  }
  return d;
}

double empirical_quantile(std::vector<double> sample, double p) {
  if (sample.empty()) throw PreconditionError("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("empirical_quantile: p outside [0,1]");
  std::sort(sample.begin(), sample.end());
  const double h = (sample.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - lo) * (sample[hi] - sample[lo]);
}

}  // namespace confgas
