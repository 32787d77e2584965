#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace slcbo {

class Ensemble;

/// Uniform 1-D bin layout over [lo, hi] with an odd number of bins, so the
/// midpoint of the box is a bin center and never a bin edge.
class StaggeredGrid {
 public:
  StaggeredGrid(double lo, double hi, int n_bins);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t n_bins() const { return n_bins_; }
  double bin_width() const { return width_; }
  double center(std::size_t k) const { return lo_ + (static_cast<double>(k) + 0.5) * width_; }

  /// Bins are [edge_k, edge_k+1) except the last, which is closed. Points
  /// outside [lo, hi] (and NaN) have no bin.
  std::optional<std::size_t> bin_of(double x) const {
    if (!(x >= lo_ && x <= hi_)) return std::nullopt;
    auto k = static_cast<std::size_t>((x - lo_) / width_);
    return k < n_bins_ ? k : n_bins_ - 1;
  }

 private:
  double lo_;
  double hi_;
  std::size_t n_bins_;
  double width_;
};

/// Throws ConfigError unless lo < hi and n_bins is odd and >= 3.
StaggeredGrid make_grid(double lo, double hi, int n_bins);

/// Piecewise-constant density estimate with total mass rho (box-kernel
/// mollifier of width equal to one bin).
class DensityGrid {
 public:
  DensityGrid(StaggeredGrid grid, std::vector<double> values, double mass);

  const StaggeredGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double mass() const { return mass_; }

  /// Sum of value * bin_width: rho times the in-domain fraction.
  double integral() const;

 private:
  StaggeredGrid grid_;
  std::vector<double> values_;
  double mass_;
};

/// value(k) = rho * count_k / (N * dx). Out-of-domain coordinates are dropped.
DensityGrid build_histogram(std::span<const double> coords, const StaggeredGrid& grid, double mass);

/// Histogram of coordinate j of every particle (the directional marginal).
DensityGrid build_marginal_histogram(const Ensemble& e, std::size_t coordinate,
                                     const StaggeredGrid& grid);

/// Density from raw bin counts of `total` particles.
DensityGrid density_from_counts(const StaggeredGrid& grid, std::span<const std::uint64_t> counts,
                                std::size_t total, double mass);

/// Value of the bin containing x, 0 outside [lo, hi].
double eval_density(const DensityGrid& dg, double x);

/// CSV with header `bin_center,value`.
void write_density_csv(std::ostream& os, const DensityGrid& dg);

}  // namespace slcbo
