#include <algorithm>
#include <cmath>

#include "kernel_detail.hpp"

namespace slcbo::kernels::serial {

void bin_counts(Column coords, const StaggeredGrid& grid, std::span<std::uint64_t> counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t i = 0; i < coords.count; ++i) {
    if (auto k = grid.bin_of(coords[i])) ++counts[*k];
  }
}

void drift_factors(std::span<const double> positions, std::size_t dim, const StaggeredGrid& grid,
                   std::span<const double> density_pow, double outside_pow, const DriftSpec& spec,
                   std::span<double> factors) {
  const std::size_t n = positions.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t idx = i * dim + j;
      factors[idx] =
          detail::drift_factor_at(positions[idx], j, grid, density_pow, outside_pow, spec);
    }
  }
}

void advance(std::span<double> positions, std::size_t dim, const UpdateTerms& terms) {
  const std::size_t n = positions.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t idx = i * dim + j;
      positions[idx] =
          detail::advanced(positions[idx], j, terms.factors[idx], terms.noise[idx], terms);
    }
  }
}

WeightedSum laplace_weighted_sum(std::span<const double> positions, std::size_t dim,
                                 std::span<const double> values, double value_min, double gamma) {
  WeightedSum out;
  out.numerator.assign(dim, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double w = std::exp(-gamma * (values[i] - value_min));
    out.denominator += w;
    for (std::size_t j = 0; j < dim; ++j) out.numerator[j] += w * positions[i * dim + j];
  }
  return out;
}

double power_sum(Column coords, double center, double power) {
  double s = 0.0;
  for (std::size_t i = 0; i < coords.count; ++i) s += abs_pow(coords[i] - center, power);
  return s;
}

double column_sum(Column coords) {
  double s = 0.0;
  for (std::size_t i = 0; i < coords.count; ++i) s += coords[i];
  return s;
}

double max_value(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

}  // namespace slcbo::kernels::serial
