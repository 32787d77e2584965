#include "slcbo/params.hpp"

#include <cmath>

namespace slcbo {

CoefficientProfile CoefficientProfile::consensus_distance() {
  return CoefficientProfile{HKind::DistToConsensus, KKind::Unit, {}};
}

CoefficientProfile CoefficientProfile::power_to_min(std::vector<double> reference) {
  return CoefficientProfile{HKind::PowerToMin, KKind::HPow2Alpha, std::move(reference)};
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void SimParams::validate() const {
  require(std::isfinite(lambda) && lambda > 0, "lambda must be positive");
  require(std::isfinite(sigma) && sigma >= 0, "sigma must be non-negative");
  require(std::isfinite(beta) && beta >= 0, "beta must be non-negative");
  require(std::isfinite(alpha) && alpha >= 0, "alpha must be non-negative");
  require(std::isfinite(gamma) && gamma > 0, "gamma must be positive");
  require(eta >= 0 && eta < 0.5, "eta must lie in [0, 1/2)");
  require(std::isfinite(domain.lo) && std::isfinite(domain.hi) && domain.lo < domain.hi,
          "domain must be a non-degenerate interval");
  require(std::isfinite(dt_max) && dt_max > 0, "dt_max must be positive");
  require(n_bins >= 3 && n_bins % 2 == 1, "n_bins must be odd and at least 3");
  if (profile.h == HKind::PowerToMin) {
    require(!profile.reference.empty(), "PowerToMin needs a reference point");
    for (double r : profile.reference) require(std::isfinite(r), "reference point must be finite");
  }
}

void SimParams::validate_for_dim(std::size_t dim) const {
  validate();
  if (profile.h == HKind::PowerToMin) {
    require(profile.reference.size() == 1 || profile.reference.size() == dim,
            "reference point has the wrong dimension");
  }
}

std::string to_string(HKind kind) {
  switch (kind) {
    case HKind::Unit: return "unit";
    case HKind::PowerToMin: return "power-to-min";
    case HKind::DistToConsensus: return "dist-to-consensus";
  }
  return "?";
}

std::string to_string(KKind kind) {
  switch (kind) {
    case KKind::Unit: return "unit";
    case KKind::HPow2Alpha: return "h-pow-2alpha";
  }
  return "?";
}

HKind parse_h_kind(const std::string& name) {
  if (name == "unit") return HKind::Unit;
  if (name == "power-to-min") return HKind::PowerToMin;
  if (name == "dist-to-consensus") return HKind::DistToConsensus;
  throw ConfigError("unknown H kind: " + name);
}

KKind parse_k_kind(const std::string& name) {
  if (name == "unit") return KKind::Unit;
  if (name == "h-pow-2alpha") return KKind::HPow2Alpha;
  throw ConfigError("unknown K kind: " + name);
}

}  // namespace slcbo
