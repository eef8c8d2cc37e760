#include "confgas/error.hpp"
#include "confgas/ginibre.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace confgas;

TEST_CASE("norms at c = 1 are j! / n^(j+1)") {
  for (int n : {2, 17, 500}) {
    const auto m = build_model(n, 1.0);
    REQUIRE(m.log_norms.size() == static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      CHECK(std::abs(m.log_norms[j] - (oracle::lgamma(j + 1.0) - (j + 1.0) * std::log(n))) <
            1e-10 * std::max(1.0, std::abs(m.log_norms[j])));
  }
  CHECK(std::abs(build_model(2, 1.0).log_norms[0] - std::log(0.5)) < 1e-15);
}

TEST_CASE("norms against an independent quadrature") {
  for (auto [n, c] : {std::pair{64, 2.0}, {64, 0.25}, {256, 4.0}, {1024, 0.5}}) {
    const auto m = build_model(n, c);
    for (int j = 0; j < n; j += std::max(1, n / 40)) {
      const double ref = oracle::ginibre_log_norm(n, c, j);
      CHECK_MESSAGE(std::abs(std::expm1(m.log_norms[j] - ref)) < 1e-8, "n=" << n << " c=" << c << " j=" << j);
    }
  }
}

TEST_CASE("closed form and library quadrature agree") {
  for (int n : {64, 256})
    for (double c : {0.25, 1.0, 4.0})
      for (int j = 0; j < n; ++j) {
        const double a = ginibre_log_norm_closed(n, c, j), b = ginibre_log_norm_quadrature(n, c, j);
        CHECK(std::abs(std::expm1(a - b)) < 1e-8);
      }
  CHECK_THROWS_AS(build_model(1, 1.0), DomainError);
  CHECK_THROWS_AS(build_model(10, -1.0), DomainError);
}

TEST_CASE("rescaled density") {
  const auto m1024 = build_model(1024, 1.0);
  CHECK(std::abs(rescaled_density(-6.0, m1024) - 1.0) < 0.02);
  double prev = 1.0;
  for (int n : {256, 1024, 4096}) {
    const double err = std::abs(rescaled_density(0.0, build_model(n, 1.0)) - 0.5);
    CHECK(err < prev);
    prev = err;
  }
  // Gaussian envelope R_n <= C exp(-2c x_+^2) on [0, 3] with one constant per c
  for (double c : {0.5, 2.0}) {
    const auto m = build_model(1024, c);
    double cmax = 0.0;
    for (double x = 0.0; x <= 3.0; x += 0.25) cmax = std::max(cmax, rescaled_density(x, m) * std::exp(2 * c * x * x));
    CHECK(cmax < 2.0);
  }
  CHECK_THROWS_AS(rescaled_density(100.0, m1024), PreconditionError);
}

TEST_CASE("rescaled kernel") {
  const auto cp = ConfinementParam::finite(1.0);
  const cplx z(-1.0, 0.0), w(-1.0, 1.0);
  double prev = 1.0;
  for (int n : {256, 1024, 4096}) {
    const auto m = build_model(n, 1.0);
    CHECK(std::abs(rescaled_kernel(z, z, m).real() - rescaled_density(z, m)) < 1e-13);
    const double err = std::abs(std::abs(rescaled_kernel(z, w, m)) - std::abs(kernel(z, w, cp)));
    CHECK(err < prev);
    prev = err;
  }
  const auto m = build_model(1024, 2.0);
  const cplx a(-0.5, 0.2), b(0.3, -0.6);
  const cplx kab = rescaled_kernel(a, b, m);
  CHECK(std::abs(kab - std::conj(rescaled_kernel(b, a, m))) < 1e-13);
  CHECK(rescaled_density(a, m) * rescaled_density(b, m) - std::norm(kab) >= -1e-9);
  // rotating both points about the origin of the zeta plane leaves |K_n| alone
  const double sn = std::sqrt(1024.0);
  auto rotate = [&](cplx p, double th) { return sn * ((1.0 + p / sn) * std::polar(1.0, th) - 1.0); };
  for (double th : {0.01, -0.03})
    CHECK(std::abs(std::abs(rescaled_kernel(rotate(a, th), rotate(b, th), m)) - std::abs(kab)) < 1e-12);
}
