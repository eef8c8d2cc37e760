#pragma once

// Maximum modulus of radial ensembles. The moduli of the n particles are
// distributed as independent radii with laws F_j(r) proportional to
// int_0^r s^(2j+1) exp(-n Q^(c)(s)) ds, so |zeta|_n is their maximum.

#include <cstdint>
#include <vector>

#include "confgas/orthopoly.hpp"

namespace confgas {

/// log(n/2 pi) - 2 log log n + 2 log C_c with C_c = rho sqrt(Laplacian(rho)) / Phi_c(0).
double gamma_n(int n, double c, const RadialPotential& p);

class ModulusLaws {
 public:
  /// Tables cover [rho - 10/sqrt(n Laplacian), hi] for every degree whose
  /// survival at the lower end exceeds e^-46. Without tables only the exact
  /// survival functions are available.
  explicit ModulusLaws(EnsembleModel model, bool with_tables = true);

  const EnsembleModel& model() const { return model_; }
  double rho() const { return model_.rho1(); }
  double table_lo() const { return lo_; }
  double table_hi() const { return hi_; }
  std::size_t tabled_degrees() const;

  /// log of the exterior mass 1 - F_j(r); -inf once it underflows.
  double log_survival(int j, double r) const;
  /// log F_j(r).
  double log_interior(int j, double r) const;
  /// Exact inverse of the survival function: the r with log(1 - F_j(r)) = log_v.
  double invert_exact(int j, double log_v) const;

  /// Maximum modulus for one replicate, from survival draws keyed by (seed, replicate, j).
  double draw_max(std::uint64_t seed, std::uint64_t replicate) const;

 private:
  struct Table {
    int j;
    std::vector<double> log_s;   ///< log survival at the nodes
    std::vector<double> dlog_s;  ///< its derivative in r
  };

  double log_density(int j, double r) const;
  double node(std::size_t k) const { return lo_ + step_ * static_cast<double>(k); }
  Table build_table(int j) const;
  double invert_table(const Table& t, double log_v) const;
  double log_survival_in_cell(const Table& t, std::size_t k, double r) const;
  double polish(const Table& t, double r, double log_v) const;

  EnsembleModel model_;
  std::vector<double> saddle_;   ///< maximizer of the radial density of degree j
  std::vector<double> log_s_lo_; ///< log survival at lo_, every degree
  std::vector<int> table_of_;    ///< index into tables_ or -1
  std::vector<Table> tables_;
  double lo_ = 0.0, hi_ = 0.0, step_ = 0.0;
  std::size_t nodes_ = 0;
};

/// omega = sqrt(4 n c gamma L)(r - rho - sqrt(gamma / (4 n c L))), L = Laplacian(rho).
double omega_from_radius(double r, const EnsembleModel& model, double gamma);
/// rho + h_n(x), the radius whose omega equals x.
double radius_from_omega(double x, const EnsembleModel& model, double gamma);

struct MaxModulusBatch {
  int n = 0;
  double c = 0.0;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  double gamma = 0.0;
  std::vector<double> omegas;
};

MaxModulusBatch sample_max_modulus(const ModulusLaws& laws, std::size_t sample_count,
                                   std::uint64_t seed);

/// log P(|zeta|_n <= r) = sum_j log(1 - m_j(r)).
double log_gap_probability(const ModulusLaws& laws, double r);
double gap_probability(const ModulusLaws& laws, double r);

struct TailSum {
  double total = 0.0;
  double lower_block = 0.0;  ///< degrees j <= n - sqrt(n) log n
  double sum_sq = 0.0;       ///< sum of m_j^2
};

/// Sum of exterior masses at rho + h_n(x).
TailSum tail_sum(const ModulusLaws& laws, double x);

/// exp(-exp(-x)).
double gumbel_cdf(double x);
/// Kolmogorov-Smirnov distance of the sample to the standard Gumbel law.
double ks_distance_gumbel(std::vector<double> sample);
/// Linear-interpolated empirical quantile (type 7).
double empirical_quantile(std::vector<double> sample, double p);

}  // namespace confgas
