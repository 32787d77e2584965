#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "slcbo/common.hpp"
#include "slcbo/params.hpp"
#include "slcbo/rng.hpp"

namespace slcbo {

/// N particles in d dimensions together with the mass they represent.
///
/// Positions are stored row-major: particle i occupies
/// `positions()[i * dim() .. (i + 1) * dim())`.
class Ensemble {
 public:
  Ensemble(std::size_t count, std::size_t dim, double mass, std::vector<double> positions);

  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }
  double mass() const { return mass_; }

  std::span<const double> positions() const { return positions_; }
  std::span<double> positions() { return positions_; }

  std::span<const double> particle(std::size_t i) const {
    return std::span<const double>(positions_).subspan(i * dim_, dim_);
  }
  double at(std::size_t i, std::size_t j) const { return positions_[i * dim_ + j]; }

  bool all_finite() const;
  bool operator==(const Ensemble&) const = default;

 private:
  std::size_t count_;
  std::size_t dim_;
  double mass_;
  std::vector<double> positions_;
};

/// Law of the initial particle positions.
struct InitDistribution {
  enum class Kind { Uniform, TruncatedGaussian };

  Kind kind = Kind::Uniform;
  Box box;
  std::vector<double> center;  // TruncatedGaussian only; one entry broadcasts
  double spread = 1.0;         // TruncatedGaussian standard deviation

  static InitDistribution uniform(Box box) { return {Kind::Uniform, box, {}, 1.0}; }
  static InitDistribution truncated_gaussian(Box box, std::vector<double> center, double spread) {
    return {Kind::TruncatedGaussian, box, std::move(center), spread};
  }
};

/// Samples `count` i.i.d. particles, drawing coordinates in (i, j) order.
Ensemble init_ensemble(std::size_t dim, std::size_t count, double mass,
                       const InitDistribution& init, Rng& rng);

/// Same, seeded from `params.seed`.
Ensemble init_ensemble(const SimParams& params, std::size_t dim, std::size_t count, double mass,
                       const InitDistribution& init);

/// (1/N) sum_i |X_i - mean|^2, i.e. the trace of the empirical covariance.
double ensemble_variance(const Ensemble& e);

/// Coordinate-wise mean.
std::vector<double> ensemble_mean(const Ensemble& e);

/// (rho/N) sum_i |X_ij - center_j|^p for one coordinate j, or summed over all
/// coordinates when `coordinate` is empty.
///
/// p = 2 about x* estimates V(t); p = 2 eta + 2 estimates U(t), and T = U / rho.
double weighted_moment(const Ensemble& e, std::span<const double> center, double power,
                       std::optional<std::size_t> coordinate = std::nullopt);

}  // namespace slcbo
