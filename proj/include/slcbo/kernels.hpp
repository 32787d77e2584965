#pragma once

// Data-parallel inner loops of a step. Each kernel exists twice with the
// same signature: `serial` is the plain reference loop, `omp` the OpenMP
// version used by the library. Maps and integer counts agree bit-for-bit;
// floating-point reductions in `omp` sum fixed-size blocks in index order,
// so they are independent of the thread count but may differ from `serial`
// in the last bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slcbo/density.hpp"
#include "slcbo/params.hpp"

namespace slcbo::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

/// Column j of a row-major N x d array.
struct Column {
  const double* data;
  std::size_t count;
  std::size_t stride;

  double operator[](std::size_t i) const { return data[i * stride]; }
};

inline Column column(std::span<const double> positions, std::size_t dim, std::size_t j) {
  return Column{positions.data() + j, positions.size() / dim, dim};
}

/// Everything needed to turn per-coordinate bin occupancy into drift factors
/// beta * K(x) * f(x)^alpha.
struct DriftSpec {
  double beta = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  HKind h = HKind::Unit;
  KKind k = KKind::Unit;
  std::span<const double> reference;  // x*, one entry per coordinate
  std::span<const double> consensus;  // x_gamma, one entry per coordinate
};

/// Noise amplitude H(x) per coordinate.
struct NoiseSpec {
  double eta = 0.0;
  HKind h = HKind::Unit;
  std::span<const double> reference;
  std::span<const double> consensus;
};

/// One explicit Euler-Maruyama update, in place:
/// x += lambda_dt (c_j - x)(1 + factor) + sigma_sqrt_dt H(x) xi.
struct UpdateTerms {
  double lambda_dt = 0.0;
  double sigma_sqrt_dt = 0.0;
  std::span<const double> consensus;
  std::span<const double> factors;
  std::span<const double> noise;
  NoiseSpec shape;
};

struct WeightedSum {
  std::vector<double> numerator;  // sum_i w_i X_i
  double denominator = 0.0;       // sum_i w_i
};

namespace serial {

void bin_counts(Column coords, const StaggeredGrid& grid, std::span<std::uint64_t> counts);

/// `density_pow[j * n_bins + k]` holds f_j(bin k)^alpha; `outside_pow` is the
/// value used off-grid (0, or 1 when alpha = 0).
void drift_factors(std::span<const double> positions, std::size_t dim, const StaggeredGrid& grid,
                   std::span<const double> density_pow, double outside_pow, const DriftSpec& spec,
                   std::span<double> factors);

void advance(std::span<double> positions, std::size_t dim, const UpdateTerms& terms);

/// sum_i exp(-gamma (F_i - F_min)) X_i and the matching weight sum.
WeightedSum laplace_weighted_sum(std::span<const double> positions, std::size_t dim,
                                 std::span<const double> values, double value_min, double gamma);

/// sum_i |x_i - center|^power over one column.
double power_sum(Column coords, double center, double power);

double column_sum(Column coords);

double max_value(std::span<const double> values);

}  // namespace serial

namespace omp {

void bin_counts(Column coords, const StaggeredGrid& grid, std::span<std::uint64_t> counts);

void drift_factors(std::span<const double> positions, std::size_t dim, const StaggeredGrid& grid,
                   std::span<const double> density_pow, double outside_pow, const DriftSpec& spec,
                   std::span<double> factors);

void advance(std::span<double> positions, std::size_t dim, const UpdateTerms& terms);

WeightedSum laplace_weighted_sum(std::span<const double> positions, std::size_t dim,
                                 std::span<const double> values, double value_min, double gamma);

double power_sum(Column coords, double center, double power);

double column_sum(Column coords);

double max_value(std::span<const double> values);

}  // namespace omp

/// |d|^p with the conventions used throughout: p = 2 is squared exactly and
/// 0^0 = 1.
inline double abs_pow(double d, double p) {
  if (p == 2.0) return d * d;
  if (p == 1.0) return d < 0 ? -d : d;
  if (p == 0.0) return 1.0;
  return __builtin_pow(d < 0 ? -d : d, p);
}

/// H(x) for coordinate j.
inline double noise_weight(HKind h, double eta, double x, double ref_j, double consensus_j) {
  switch (h) {
    case HKind::Unit:
      return 1.0;
    case HKind::PowerToMin:
      return abs_pow(x - ref_j, eta);
    case HKind::DistToConsensus: {
      double d = x - consensus_j;
      return d < 0 ? -d : d;
    }
  }
  return 1.0;
}

}  // namespace slcbo::kernels
