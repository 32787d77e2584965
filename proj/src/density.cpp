#include "slcbo/density.hpp"

#include <cmath>
#include <ostream>

#include "slcbo/common.hpp"
#include "slcbo/ensemble.hpp"
#include "slcbo/kernels.hpp"

namespace slcbo {

StaggeredGrid::StaggeredGrid(double lo, double hi, int n_bins)
    : lo_(lo), hi_(hi), n_bins_(static_cast<std::size_t>(n_bins > 0 ? n_bins : 1)),
      width_((hi - lo) / static_cast<double>(n_bins > 0 ? n_bins : 1)) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("grid needs lo < hi");
  }
  if (n_bins < 3) throw ConfigError("grid needs at least 3 bins");
  if (n_bins % 2 == 0) {
    throw ConfigError("grid needs an odd bin count so the box midpoint is a bin center, got " +
                      std::to_string(n_bins));
  }
}

StaggeredGrid make_grid(double lo, double hi, int n_bins) { return StaggeredGrid(lo, hi, n_bins); }

DensityGrid::DensityGrid(StaggeredGrid grid, std::vector<double> values, double mass)
    : grid_(grid), values_(std::move(values)), mass_(mass) {
  if (values_.size() != grid_.n_bins()) throw ConfigError("density values do not match the grid");
}

double DensityGrid::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.bin_width();
}

DensityGrid density_from_counts(const StaggeredGrid& grid, std::span<const std::uint64_t> counts,
                                std::size_t total, double mass) {
  std::vector<double> values(grid.n_bins(), 0.0);
  const double scale = mass / (static_cast<double>(total) * grid.bin_width());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = scale * static_cast<double>(counts[k]);
  return DensityGrid(grid, std::move(values), mass);
}

DensityGrid build_histogram(std::span<const double> coords, const StaggeredGrid& grid, double mass) {
  if (coords.empty()) throw ConfigError("histogram needs at least one coordinate");
  std::vector<std::uint64_t> counts(grid.n_bins());
  kernels::omp::bin_counts(kernels::Column{coords.data(), coords.size(), 1}, grid, counts);
  return density_from_counts(grid, counts, coords.size(), mass);
}

DensityGrid build_marginal_histogram(const Ensemble& e, std::size_t coordinate,
                                     const StaggeredGrid& grid) {
  if (coordinate >= e.dim()) throw ConfigError("marginal coordinate out of range");
  std::vector<std::uint64_t> counts(grid.n_bins());
  kernels::omp::bin_counts(kernels::column(e.positions(), e.dim(), coordinate), grid, counts);
  return density_from_counts(grid, counts, e.count(), e.mass());
}

double eval_density(const DensityGrid& dg, double x) {
  auto k = dg.grid().bin_of(x);
  return k ? dg.values()[*k] : 0.0;
}

void write_density_csv(std::ostream& os, const DensityGrid& dg) {
  auto old = os.precision(17);
  os << "bin_center,value\n";
  for (std::size_t k = 0; k < dg.grid().n_bins(); ++k) {
    os << dg.grid().center(k) << ',' << dg.values()[k] << '\n';
  }
  os.precision(old);
}

}  // namespace slcbo
