#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slcbo/consensus.hpp"
#include "slcbo/density.hpp"
#include "slcbo/ensemble.hpp"
#include "slcbo/objectives.hpp"
#include "slcbo/params.hpp"
#include "slcbo/rng.hpp"

namespace slcbo {

/// Where the consensus point of a step comes from.
class ConsensusRule {
 public:
  /// x_gamma held at a given point for the whole run.
  static ConsensusRule fixed(std::vector<double> point);
  /// x_gamma recomputed every step from `objective` (kept by reference).
  static ConsensusRule laplace(const Objective& objective);
  /// x_gamma from the histogram of a 1-D ensemble on `grid` rather than from
  /// the particles themselves (see consensus_from_density).
  static ConsensusRule laplace_density(const Objective& objective, StaggeredGrid grid);

  bool is_fixed() const { return objective_ == nullptr; }
  bool uses_density() const { return grid_.has_value(); }
  const std::vector<double>& fixed_point() const { return point_; }
  const Objective* objective() const { return objective_; }

  /// Consensus point for the current ensemble.
  std::vector<double> evaluate(const Ensemble& e, double gamma) const;

 private:
  std::vector<double> point_;
  const Objective* objective_ = nullptr;
  std::optional<StaggeredGrid> grid_;
};

struct StepReport {
  enum class Binding { Cap, Density, TimeLimit };

  double dt_used = 0.0;
  Binding dt_binding = Binding::Cap;
  /// max over particles and coordinates of beta K f^alpha.
  double max_drift_factor = 0.0;
};

/// min(dt_max, 1 / max factor), or dt_max when every factor is 0. The result
/// never violates dt * factor <= 1 in floating point.
double adaptive_dt(std::span<const double> drift_factors, double dt_max);

/// Reusable state for stepping one ensemble: scratch buffers sized on first
/// use. One Stepper per run; not shareable between threads.
class Stepper {
 public:
  Stepper(SimParams params, ConsensusRule rule);

  /// One marginal-based superlinear step, in place. `dt_limit` caps dt
  /// further (remaining time to a horizon).
  StepReport advance(Ensemble& e, Rng& rng,
                     double dt_limit = std::numeric_limits<double>::infinity());

  /// Consensus point used by the last advance().
  const std::vector<double>& last_consensus() const { return consensus_; }
  /// Marginal density of coordinate j built during the last advance(); only
  /// populated when beta > 0.
  DensityGrid last_marginal(std::size_t coordinate, const Ensemble& e) const;

  const SimParams& params() const { return params_; }
  const ConsensusRule& rule() const { return rule_; }

 private:
  SimParams params_;
  ConsensusRule rule_;
  StaggeredGrid grid_;
  std::vector<double> consensus_;
  std::vector<double> reference_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> density_pow_;
  std::vector<double> factors_;
  std::vector<double> noise_;
};

/// One step of the 1-D scheme. Requires dim 1.
std::pair<Ensemble, StepReport> step_1d(const Ensemble& e, const SimParams& params,
                                        const ConsensusRule& rule, Rng& rng);

/// One step of the marginal-based scheme: consensus once, one histogram per
/// coordinate, a common dt, independent noise per (particle, coordinate).
std::pair<Ensemble, StepReport> step_marginal(const Ensemble& e, const SimParams& params,
                                              const ConsensusRule& rule, Rng& rng);

/// Classical anisotropic CBO step with fixed dt = dt_max and noise
/// |x - x_gamma| per coordinate. Written independently of Stepper.
std::pair<Ensemble, StepReport> step_cbo(const Ensemble& e, const SimParams& params,
                                         const ConsensusRule& rule, Rng& rng);

enum class Method { SuperlinearMarginal, ClassicalCbo };

struct StoppingRule {
  double t_max = std::numeric_limits<double>::infinity();
  std::size_t n_max = std::numeric_limits<std::size_t>::max();
  /// Stop once the ensemble variance drops strictly below this.
  double variance_threshold = 0.0;
};

enum class Termination { Variance, MaxIters, MaxTime };

struct SeriesRow {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double variance = 0.0;
  double V = 0.0;
  double U = 0.0;
  std::vector<double> consensus;
};

struct RunOptions {
  Method method = Method::SuperlinearMarginal;
  /// Center for V and U; defaults to the fixed consensus point or the
  /// objective's minimizer.
  std::vector<double> reference;
  /// Keep every k-th step in the series (0 disables the series; the initial
  /// and final rows are always kept when enabled).
  std::size_t record_stride = 1;
};

struct RunRecord {
  Termination termination = Termination::MaxIters;
  std::size_t iterations = 0;
  double final_time = 0.0;
  /// Consensus point of the final ensemble.
  std::vector<double> consensus;
  std::vector<SeriesRow> series;
  /// Steps where dt * max factor > 1 (should stay 0).
  std::size_t cfl_violations = 0;
  double max_cfl_product = 0.0;
  std::size_t density_bound_steps = 0;
  Ensemble final_state;
};

/// Iterates the chosen stepper until the first rule fires. The variance rule
/// is checked before every step, so an infinite threshold stops at once.
RunRecord run_until(Ensemble e, const SimParams& params, const ConsensusRule& rule,
                    const StoppingRule& stop, Rng& rng, const RunOptions& options = {});

/// Columns: t, dt, variance, V, U, x_gamma_0 .. x_gamma_{d-1}.
void write_series_csv(std::ostream& os, const RunRecord& record);

std::string to_string(Termination t);

}  // namespace slcbo
