#include <cstdlib>

#include "confgas/error.hpp"
#include "confgas/sampler.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace confgas;

namespace {

const RadialPotential kGinibre = RadialPotential::ginibre();

// log prod_j P(j+1, n r^2): the exact gap probability of the free-boundary Ginibre ensemble.
double ginibre_log_gap(int n, double r) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += std::log(oracle::reg_lower(j + 1.0, n * r * r));
  return s;
}

}  // namespace

TEST_CASE("gamma_n") {
  for (int n : {100, 10000})
    CHECK(std::abs(gamma_n(n, 1.0, kGinibre) - (std::log(n / (2 * oracle::kPi)) - 2 * std::log(std::log(n)))) < 1e-13);
  for (double c : {0.5, 2.0}) {
    const double phi0 = (std::sqrt(c) + 1) / (2 * std::sqrt(c));
    const double want = std::log(1000 / (2 * oracle::kPi)) - 2 * std::log(std::log(1000.0)) + std::log(1.0 / (phi0 * phi0));
    CHECK(std::abs(gamma_n(1000, c, kGinibre) - want) < 1e-12);
  }
  CHECK_THROWS_AS(gamma_n(15, 1.0, kGinibre), DomainError);
}

TEST_CASE("survival functions against Boost") {
  const int n = 500;
  const ModulusLaws laws(ensemble_from_ginibre(build_model(n, 1.0)));
  for (int j : {0, 250, 480, 499})
    for (double r : {0.6, 0.95, 1.0, 1.05, 1.2}) {
      const double ref = oracle::reg_upper(j + 1.0, n * r * r);
      if (ref < 1e-290) continue;
      CHECK_MESSAGE(std::abs(std::expm1(laws.log_survival(j, r) - std::log(ref))) < 1e-9, "j=" << j << " r=" << r);
      const double inner = oracle::reg_lower(j + 1.0, n * r * r);
      if (inner > 1e-290) CHECK(std::abs(std::expm1(laws.log_interior(j, r) - std::log(inner))) < 1e-9);
    }
  // exterior mass past the droplet for c != 1, against the Boost norm quadrature
  const int m = 400;
  const double c = 2.5;
  const ModulusLaws confined(build_ensemble(m, c, kGinibre));
  for (int j : {390, 399})
    for (double r : {1.02, 1.1}) {
      auto f = [&](double s) {
        return std::exp(std::log(2.0) + (2 * j + 1) * std::log(s) - m * (c * s * s + (1 - c) * (1 + 2 * std::log(s))) -
                        confined.model().log_norms[j]);
      };
      const double ref = oracle::gk(f, r, 3.0, 1e-14);
      CHECK(std::abs(std::expm1(confined.log_survival(j, r) - std::log(ref))) < 1e-9);
    }
}

TEST_CASE("inversion") {
  const ModulusLaws laws(build_ensemble(1000, 0.5, kGinibre));
  for (int j : {10, 900, 999})
    for (double lv : {-30.0, -5.0, -0.7, -1e-3}) {
      const double r = laws.invert_exact(j, lv);
      CHECK(std::abs(laws.log_survival(j, r) - lv) < 1e-9 * std::max(1.0, std::abs(lv)));
    }
  CHECK(laws.tabled_degrees() > 0);
  CHECK(laws.table_lo() < laws.rho());
  CHECK(laws.table_hi() > laws.rho());
}

TEST_CASE("gap probability and tail sum") {
  const int n = 1000;
  const ModulusLaws laws(ensemble_from_ginibre(build_model(n, 1.0)));
  const double g = gamma_n(n, 1.0, kGinibre);
  for (double x : {-1.0, 0.0, 2.0}) {
    const double r = radius_from_omega(x, laws.model(), g);
    CHECK(std::abs(omega_from_radius(r, laws.model(), g) - x) < 1e-10);
    // r - rho = r_n(c, x) / sqrt(4 n Laplacian) with r_n = (sqrt(g) + x / sqrt(g)) / sqrt(c)
    CHECK(std::abs((r - 1.0) - (std::sqrt(g) + x / std::sqrt(g)) / std::sqrt(4.0 * n)) < 1e-14);
    CHECK(std::abs(log_gap_probability(laws, r) - ginibre_log_gap(n, r)) < 1e-9);
    const TailSum t = tail_sum(laws, x);
    const double excess = -log_gap_probability(laws, r) - t.total;
    CHECK(excess >= -1e-12);
    CHECK(excess <= t.sum_sq * (1 + 1e-6));
    CHECK(t.lower_block < 1e-8 * t.total);
  }
  CHECK(gap_probability(laws, 0.1) < 1e-300);
}

TEST_CASE("draws") {
  const int n = 1000;
  const ModulusLaws a(ensemble_from_ginibre(build_model(n, 1.0)));
  const ModulusLaws b(build_ensemble(n, 1.0, kGinibre));
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const double ra = a.draw_max(11, rep);
    CHECK(ra == a.draw_max(11, rep));
    CHECK(std::abs(ra - b.draw_max(11, rep)) < 1e-9);
  }
  CHECK(a.draw_max(11, 0) != a.draw_max(12, 0));

  setenv("CONFGAS_THREADS", "1", 1);
  const auto one = sample_max_modulus(a, 300, 99);
  setenv("CONFGAS_THREADS", "3", 1);
  const auto three = sample_max_modulus(a, 300, 99);
  unsetenv("CONFGAS_THREADS");
  CHECK(one.omegas == three.omegas);
  CHECK(one.sample_count == 300);
  CHECK(one.gamma == gamma_n(n, 1.0, kGinibre));
}

TEST_CASE("Gumbel helpers") {
  CHECK(gumbel_cdf(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  std::vector<double> q;
  const int m = 1000;
  for (int i = 0; i < m; ++i) q.push_back(-std::log(-std::log((i + 0.5) / m)));
  CHECK(std::abs(ks_distance_gumbel(q) - 0.5 / m) < 1e-12);
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  CHECK(empirical_quantile(v, 0.5) == 2.5);
  CHECK(empirical_quantile(v, 0.0) == 1.0);
  CHECK(empirical_quantile(v, 1.0) == 4.0);
  CHECK(std::abs(empirical_quantile(v, 0.1) - 1.3) < 1e-15);
}
