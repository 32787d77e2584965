#include "slcbo/ensemble.hpp"

#include <cmath>
#include <random>
#include <string>

#include "slcbo/kernels.hpp"

namespace slcbo {

Ensemble::Ensemble(std::size_t count, std::size_t dim, double mass, std::vector<double> positions)
    : count_(count), dim_(dim), mass_(mass), positions_(std::move(positions)) {
  if (count_ < 1) throw ConfigError("ensemble needs at least one particle");
  if (dim_ < 1) throw ConfigError("ensemble dimension must be at least 1");
  if (!(mass_ > 0) || !std::isfinite(mass_)) throw ConfigError("ensemble mass must be positive");
  if (positions_.size() != count_ * dim_) {
    throw ConfigError("position array has " + std::to_string(positions_.size()) +
                      " entries, expected " + std::to_string(count_ * dim_));
  }
}

bool Ensemble::all_finite() const {
  for (double x : positions_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Ensemble init_ensemble(std::size_t dim, std::size_t count, double mass,
                       const InitDistribution& init, Rng& rng) {
  if (count < 1) throw ConfigError("particle count must be at least 1");
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  if (!(mass > 0)) throw ConfigError("mass must be positive");
  const Box& box = init.box;
  if (!(box.lo < box.hi) || !std::isfinite(box.lo) || !std::isfinite(box.hi)) {
    throw ConfigError("initial box is degenerate");
  }

  std::vector<double> positions(count * dim);
  if (init.kind == InitDistribution::Kind::Uniform) {
    std::uniform_real_distribution<double> u(box.lo, box.hi);
    for (double& x : positions) x = u(rng);
  } else {
    if (!(init.spread > 0)) throw ConfigError("truncated Gaussian needs a positive spread");
    if (init.center.size() != 1 && init.center.size() != dim) {
      throw ConfigError("truncated Gaussian center has the wrong dimension");
    }
    std::normal_distribution<double> g(0.0, init.spread);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double c = init.center.size() == 1 ? init.center[0] : init.center[j];
        if (!box.contains(c)) throw ConfigError("truncated Gaussian center lies outside the box");
        double x;
        do {
          x = c + g(rng);
        } while (!box.contains(x));
        positions[i * dim + j] = x;
      }
    }
  }
  return Ensemble(count, dim, mass, std::move(positions));
}

Ensemble init_ensemble(const SimParams& params, std::size_t dim, std::size_t count, double mass,
                       const InitDistribution& init) {
  Rng rng = make_rng(params.seed);
  return init_ensemble(dim, count, mass, init, rng);
}

std::vector<double> ensemble_mean(const Ensemble& e) {
  std::vector<double> mean(e.dim());
  for (std::size_t j = 0; j < e.dim(); ++j) {
    mean[j] = kernels::omp::column_sum(kernels::column(e.positions(), e.dim(), j)) /
              static_cast<double>(e.count());
  }
  return mean;
}

double ensemble_variance(const Ensemble& e) {
  auto mean = ensemble_mean(e);
  double total = 0.0;
  for (std::size_t j = 0; j < e.dim(); ++j) {
    total += kernels::omp::power_sum(kernels::column(e.positions(), e.dim(), j), mean[j], 2.0);
  }
  return total / static_cast<double>(e.count());
}

double weighted_moment(const Ensemble& e, std::span<const double> center, double power,
                       std::optional<std::size_t> coordinate) {
  if (center.size() != e.dim()) throw ConfigError("moment center has the wrong dimension");
  if (!(power >= 0)) throw ConfigError("moment power must be non-negative");
  double sum = 0.0;
  if (coordinate) {
    if (*coordinate >= e.dim()) throw ConfigError("moment coordinate out of range");
    sum = kernels::omp::power_sum(kernels::column(e.positions(), e.dim(), *coordinate),
                                  center[*coordinate], power);
  } else {
    for (std::size_t j = 0; j < e.dim(); ++j) {
      sum += kernels::omp::power_sum(kernels::column(e.positions(), e.dim(), j), center[j], power);
    }
  }
  return e.mass() / static_cast<double>(e.count()) * sum;
}

}  // namespace slcbo
