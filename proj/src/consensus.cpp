#include "slcbo/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "slcbo/common.hpp"
#include "slcbo/density.hpp"
#include "slcbo/ensemble.hpp"
#include "slcbo/kernels.hpp"

namespace slcbo {

std::vector<double> evaluate_all(const Ensemble& e, const ObjectiveFn& objective) {
  std::vector<double> values(e.count());
  const auto n = static_cast<std::ptrdiff_t>(e.count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(i)] = objective(e.particle(static_cast<std::size_t>(i)));
  }
  return values;
}

ConsensusPoint consensus_point_from_values(const Ensemble& e, std::span<const double> values,
                                           double gamma) {
  if (!(gamma > 0)) throw ConfigError("gamma must be positive");
  if (values.size() != e.count()) throw ConfigError("one objective value per particle expected");

  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "objective is not finite at particle " << i << " (value " << values[i] << ")";
      throw NumericalError(msg.str());
    }
    fmin = std::min(fmin, values[i]);
  }

  auto sums = kernels::omp::laplace_weighted_sum(e.positions(), e.dim(), values, fmin, gamma);

  ConsensusPoint out;
  out.coords.resize(e.dim());
  for (std::size_t j = 0; j < e.dim(); ++j) {
    // Rounding can push a weighted mean an ulp past the data; clamp to the
    // coordinate range so the result stays inside the hull.
    auto col = kernels::column(e.positions(), e.dim(), j);
    double lo = col[0], hi = col[0];
    for (std::size_t i = 1; i < col.count; ++i) {
      lo = std::min(lo, col[i]);
      hi = std::max(hi, col[i]);
    }
    out.coords[j] = std::clamp(sums.numerator[j] / sums.denominator, lo, hi);
  }
  out.weight_floor_hit = std::exp(-gamma * fmin) == 0.0;
  return out;
}

ConsensusPoint consensus_point(const Ensemble& e, const ObjectiveFn& objective, double gamma) {
  auto values = evaluate_all(e, objective);
  return consensus_point_from_values(e, values, gamma);
}

ConsensusPoint consensus_from_density(const DensityGrid& density, const ObjectiveFn& objective,
                                      double gamma) {
  if (!(gamma > 0)) throw ConfigError("gamma must be positive");
  const auto& grid = density.grid();
  auto f = density.values();

  std::vector<double> values(grid.n_bins(), 0.0);
  double fmin = std::numeric_limits<double>::infinity();
  std::size_t first = grid.n_bins(), last = 0;
  for (std::size_t k = 0; k < grid.n_bins(); ++k) {
    if (!(f[k] > 0.0)) continue;
    double c = grid.center(k);
    values[k] = objective(std::span<const double>(&c, 1));
    if (!std::isfinite(values[k])) {
      std::ostringstream msg;
      msg << "objective is not finite at bin center " << c;
      throw NumericalError(msg.str());
    }
    fmin = std::min(fmin, values[k]);
    first = std::min(first, k);
    last = k;
  }
  if (first == grid.n_bins()) throw NumericalError("density consensus: no mass inside the grid");

  double num = 0.0, den = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    if (!(f[k] > 0.0)) continue;
    double w = std::exp(-gamma * (values[k] - fmin)) * f[k];
    num += grid.center(k) * w;
    den += w;
  }
  ConsensusPoint out;
  out.coords = {std::clamp(num / den, grid.center(first), grid.center(last))};
  out.weight_floor_hit = std::exp(-gamma * fmin) == 0.0;
  return out;
}

}  // namespace slcbo
