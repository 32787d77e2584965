#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <omp.h>

#include "kernel_detail.hpp"

namespace slcbo::kernels::omp {

namespace {

std::ptrdiff_t block_count(std::size_t n) {
  return static_cast<std::ptrdiff_t>((n + kReductionBlock - 1) / kReductionBlock);
}

// Sum of body(i) over [0, n): fixed blocks reduced in parallel, block
// partials added in order.
template <typename Body>
double blocked_sum(std::size_t n, Body body) {
  const std::ptrdiff_t nb = block_count(n);
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    std::size_t end = std::min(n, begin + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += body(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void bin_counts(Column coords, const StaggeredGrid& grid, std::span<std::uint64_t> counts) {
  std::fill(counts.begin(), counts.end(), 0);
  const auto n = static_cast<std::ptrdiff_t>(coords.count);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(counts.size(), 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (auto k = grid.bin_of(coords[static_cast<std::size_t>(i)])) ++local[*k];
    }
#pragma omp critical(slcbo_bin_merge)
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += local[k];
  }
}

void drift_factors(std::span<const double> positions, std::size_t dim, const StaggeredGrid& grid,
                   std::span<const double> density_pow, double outside_pow, const DriftSpec& spec,
                   std::span<double> factors) {
  const auto n = static_cast<std::ptrdiff_t>(positions.size() / dim);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * dim + j;
      factors[idx] =
          detail::drift_factor_at(positions[idx], j, grid, density_pow, outside_pow, spec);
    }
  }
}

void advance(std::span<double> positions, std::size_t dim, const UpdateTerms& terms) {
  const auto n = static_cast<std::ptrdiff_t>(positions.size() / dim);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t idx = static_cast<std::size_t>(i) * dim + j;
      positions[idx] =
          detail::advanced(positions[idx], j, terms.factors[idx], terms.noise[idx], terms);
    }
  }
}

WeightedSum laplace_weighted_sum(std::span<const double> positions, std::size_t dim,
                                 std::span<const double> values, double value_min, double gamma) {
  const std::size_t n = values.size();
  const std::ptrdiff_t nb = block_count(n);
  const std::size_t width = dim + 1;
  std::vector<double> partial(static_cast<std::size_t>(nb) * width, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    std::size_t end = std::min(n, begin + kReductionBlock);
    double* acc = partial.data() + static_cast<std::size_t>(b) * width;
    for (std::size_t i = begin; i < end; ++i) {
      double w = std::exp(-gamma * (values[i] - value_min));
      acc[dim] += w;
      for (std::size_t j = 0; j < dim; ++j) acc[j] += w * positions[i * dim + j];
    }
  }
  WeightedSum out;
  out.numerator.assign(dim, 0.0);
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const double* acc = partial.data() + static_cast<std::size_t>(b) * width;
    for (std::size_t j = 0; j < dim; ++j) out.numerator[j] += acc[j];
    out.denominator += acc[dim];
  }
  return out;
}

double power_sum(Column coords, double center, double power) {
  return blocked_sum(coords.count,
                     [&](std::size_t i) { return abs_pow(coords[i] - center, power); });
}

double column_sum(Column coords) {
  return blocked_sum(coords.count, [&](std::size_t i) { return coords[i]; });
}

double max_value(std::span<const double> values) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, values[static_cast<std::size_t>(i)]);
  return m;
}

}  // namespace slcbo::kernels::omp
