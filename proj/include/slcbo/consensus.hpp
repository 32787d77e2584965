#pragma once

#include <functional>
#include <span>
#include <vector>

namespace slcbo {

class Ensemble;
class DensityGrid;

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Laplace-weighted average of the particle positions.
struct ConsensusPoint {
  std::vector<double> coords;
  /// True when every raw weight exp(-gamma F_i) underflows to zero, i.e. the
  /// unshifted formula would have divided 0 by 0.
  bool weight_floor_hit = false;
};

/// sum_i X_i w_i / sum_i w_i with w_i = exp(-gamma (F(X_i) - min_j F(X_j))).
///
/// The shift makes the largest weight exactly 1. Throws NumericalError naming
/// the particle if any objective value is not finite.
ConsensusPoint consensus_point(const Ensemble& e, const ObjectiveFn& objective, double gamma);

/// Same, from precomputed objective values (one per particle).
ConsensusPoint consensus_point_from_values(const Ensemble& e, std::span<const double> values,
                                           double gamma);

/// 1-D consensus from a density estimate:
///   sum_k c_k w_k f_k / sum_k w_k f_k,  w_k = exp(-gamma (F(c_k) - min F)),
/// over the bin centers c_k of occupied bins (min taken over those bins).
/// Throws NumericalError when the grid carries no mass.
ConsensusPoint consensus_from_density(const DensityGrid& density, const ObjectiveFn& objective,
                                      double gamma);

/// Objective value of every particle, evaluated in parallel.
std::vector<double> evaluate_all(const Ensemble& e, const ObjectiveFn& objective);

}  // namespace slcbo
