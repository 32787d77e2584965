#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slcbo/common.hpp"

namespace slcbo {

/// Diffusion weight H.
enum class HKind {
  Unit,             // H = 1
  PowerToMin,       // H = |x - x*|^eta
  DistToConsensus,  // H = |x - x_gamma|, per coordinate
};

/// Drift weight K.
enum class KKind {
  Unit,        // K = 1
  HPow2Alpha,  // K = H^(2 alpha)
};

/// Choice of the coefficient functions H and K.
///
/// `reference` is the point x* used by PowerToMin. A single entry is
/// broadcast to every coordinate.
struct CoefficientProfile {
  HKind h = HKind::DistToConsensus;
  KKind k = KKind::Unit;
  std::vector<double> reference;

  /// Classical CBO noise: H = |x - x_gamma|, K = 1.
  static CoefficientProfile consensus_distance();
  /// H = |x - x*|^eta with K = H^(2 alpha).
  static CoefficientProfile power_to_min(std::vector<double> reference);

  double reference_at(std::size_t coordinate) const {
    return reference.size() == 1 ? reference.front() : reference.at(coordinate);
  }
};

enum class DtMode {
  Adaptive,  // dt = min(dt_max, min_i 1 / (beta K f^alpha))
  FixedCap,  // dt = dt_max regardless of the density term
};

/// Model and numerical parameters of a run.
struct SimParams {
  double lambda = 1.0;
  double sigma = 0.5;
  double beta = 1.0;
  double alpha = 0.25;
  double gamma = 50.0;
  double eta = 0.0;
  Box domain{-3.0, 3.0};
  double dt_max = 0.05;
  int n_bins = 201;
  std::uint64_t seed = 0;
  CoefficientProfile profile;
  DtMode dt_mode = DtMode::Adaptive;

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
  /// Extra checks that need the problem dimension (profile reference size).
  void validate_for_dim(std::size_t dim) const;
};

std::string to_string(HKind kind);
std::string to_string(KKind kind);
HKind parse_h_kind(const std::string& name);
KKind parse_k_kind(const std::string& name);

}  // namespace slcbo
