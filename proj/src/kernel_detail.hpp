#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cmath>

#include "slcbo/kernels.hpp"

namespace slcbo::kernels::detail {

inline double drift_factor_at(double x, std::size_t j, const StaggeredGrid& grid,
                              std::span<const double> density_pow, double outside_pow,
                              const DriftSpec& spec) {
  if (spec.beta == 0.0) return 0.0;
  auto bin = grid.bin_of(x);
  double fpow = bin ? density_pow[j * grid.n_bins() + *bin] : outside_pow;
  if (fpow == 0.0) return 0.0;
  double k = 1.0;
  if (spec.k == KKind::HPow2Alpha) {
    double ref = spec.reference.empty() ? 0.0 : spec.reference[j];
    double c = spec.consensus.empty() ? 0.0 : spec.consensus[j];
    k = abs_pow(noise_weight(spec.h, spec.eta, x, ref, c), 2.0 * spec.alpha);
  }
  return spec.beta * k * fpow;
}

inline double advanced(double x, std::size_t j, double factor, double xi, const UpdateTerms& t) {
  double ref = t.shape.reference.empty() ? 0.0 : t.shape.reference[j];
  double h = noise_weight(t.shape.h, t.shape.eta, x, ref, t.consensus[j]);
  return x + t.lambda_dt * (t.consensus[j] - x) * (1.0 + factor) + t.sigma_sqrt_dt * h * xi;
}

}  // namespace slcbo::kernels::detail
