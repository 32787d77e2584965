#include "slcbo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "slcbo/kernels.hpp"

namespace slcbo {

ConsensusRule ConsensusRule::fixed(std::vector<double> point) {
  if (point.empty()) throw ConfigError("fixed consensus point is empty");
  ConsensusRule r;
  r.point_ = std::move(point);
  return r;
}

ConsensusRule ConsensusRule::laplace(const Objective& objective) {
  ConsensusRule r;
  r.objective_ = &objective;
  return r;
}

ConsensusRule ConsensusRule::laplace_density(const Objective& objective, StaggeredGrid grid) {
  if (objective.dim() != 1) throw ConfigError("density consensus needs a 1-D objective");
  ConsensusRule r;
  r.objective_ = &objective;
  r.grid_ = grid;
  return r;
}

std::vector<double> ConsensusRule::evaluate(const Ensemble& e, double gamma) const {
  if (is_fixed()) {
    if (point_.size() == 1 && e.dim() > 1) return std::vector<double>(e.dim(), point_.front());
    if (point_.size() != e.dim()) throw ConfigError("fixed consensus point has the wrong dimension");
    return point_;
  }
  if (objective_->dim() != e.dim()) {
    throw ConfigError("objective " + objective_->name() + " has dimension " +
                      std::to_string(objective_->dim()) + ", ensemble has " +
                      std::to_string(e.dim()));
  }
  const Objective& f = *objective_;
  if (grid_) {
    return consensus_from_density(build_marginal_histogram(e, 0, *grid_),
                                  [&f](std::span<const double> x) { return f(x); }, gamma)
        .coords;
  }
  return consensus_point(e, [&f](std::span<const double> x) { return f(x); }, gamma).coords;
}

double adaptive_dt(std::span<const double> drift_factors, double dt_max) {
  double m = 0.0;
  for (double v : drift_factors) m = std::max(m, v);
  if (m == 0.0) return dt_max;
  double dt = 1.0 / m;
  while (dt * m > 1.0) dt = std::nextafter(dt, 0.0);
  return std::min(dt_max, dt);
}

namespace {

void check_finite(const Ensemble& e, double dt) {
  auto pos = e.positions();
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (!std::isfinite(pos[k])) {
      std::ostringstream msg;
      msg << "non-finite position after step: particle " << k / e.dim() << ", coordinate "
          << k % e.dim() << ", dt " << dt;
      throw NumericalError(msg.str());
    }
  }
}

void draw_normals(Rng& rng, std::vector<double>& out, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  out.resize(n);
  for (auto& v : out) v = normal(rng);
}

}  // namespace

Stepper::Stepper(SimParams params, ConsensusRule rule)
    : params_(std::move(params)),
      rule_(std::move(rule)),
      grid_(make_grid(params_.domain.lo, params_.domain.hi, params_.n_bins)) {
  params_.validate();
}

StepReport Stepper::advance(Ensemble& e, Rng& rng, double dt_limit) {
  const std::size_t n = e.count();
  const std::size_t d = e.dim();
  const std::size_t nb = grid_.n_bins();
  const auto& p = params_;

  consensus_ = rule_.evaluate(e, p.gamma);

  reference_.assign(d, 0.0);
  if (!p.profile.reference.empty()) {
    for (std::size_t j = 0; j < d; ++j) reference_[j] = p.profile.reference_at(j);
  }

  factors_.assign(n * d, 0.0);
  if (p.beta > 0.0) {
    counts_.assign(d * nb, 0);
    density_pow_.assign(d * nb, 0.0);
    const double scale = e.mass() / (static_cast<double>(n) * grid_.bin_width());
    for (std::size_t j = 0; j < d; ++j) {
      std::span<std::uint64_t> cj(counts_.data() + j * nb, nb);
      kernels::omp::bin_counts(kernels::column(e.positions(), d, j), grid_, cj);
      for (std::size_t k = 0; k < nb; ++k) {
        double f = scale * static_cast<double>(cj[k]);
        density_pow_[j * nb + k] = p.alpha == 0.0 ? 1.0 : (f == 0.0 ? 0.0 : std::pow(f, p.alpha));
      }
    }
    kernels::DriftSpec spec{p.beta, p.alpha, p.eta, p.profile.h, p.profile.k, reference_,
                            consensus_};
    kernels::omp::drift_factors(e.positions(), d, grid_, density_pow_,
                                p.alpha == 0.0 ? 1.0 : 0.0, spec, factors_);
  }

  StepReport report;
  report.max_drift_factor = kernels::omp::max_value(factors_);
  double dt = p.dt_max;
  if (p.dt_mode == DtMode::Adaptive) {
    dt = adaptive_dt(factors_, p.dt_max);
    if (dt < p.dt_max) report.dt_binding = StepReport::Binding::Density;
  }
  if (dt_limit < dt) {
    dt = dt_limit;
    report.dt_binding = StepReport::Binding::TimeLimit;
  }
  report.dt_used = dt;

  draw_normals(rng, noise_, n * d);
  kernels::UpdateTerms terms{p.lambda * dt,
                             p.sigma * std::sqrt(dt),
                             consensus_,
                             factors_,
                             noise_,
                             {p.eta, p.profile.h, reference_, consensus_}};
  kernels::omp::advance(e.positions(), d, terms);
  check_finite(e, dt);
  return report;
}

DensityGrid Stepper::last_marginal(std::size_t coordinate, const Ensemble& e) const {
  const std::size_t nb = grid_.n_bins();
  if (counts_.size() < (coordinate + 1) * nb) {
    throw ConfigError("no marginal histogram recorded for this coordinate");
  }
  return density_from_counts(
      grid_, std::span<const std::uint64_t>(counts_.data() + coordinate * nb, nb), e.count(),
      e.mass());
}

std::pair<Ensemble, StepReport> step_marginal(const Ensemble& e, const SimParams& params,
                                              const ConsensusRule& rule, Rng& rng) {
  params.validate_for_dim(e.dim());
  Stepper stepper(params, rule);
  Ensemble next = e;
  StepReport report = stepper.advance(next, rng);
  return {std::move(next), report};
}

std::pair<Ensemble, StepReport> step_1d(const Ensemble& e, const SimParams& params,
                                        const ConsensusRule& rule, Rng& rng) {
  if (e.dim() != 1) throw ConfigError("step_1d needs a one-dimensional ensemble");
  return step_marginal(e, params, rule, rng);
}

std::pair<Ensemble, StepReport> step_cbo(const Ensemble& e, const SimParams& params,
                                         const ConsensusRule& rule, Rng& rng) {
  params.validate();
  const std::size_t n = e.count();
  const std::size_t d = e.dim();
  std::vector<double> c = rule.evaluate(e, params.gamma);
  const double dt = params.dt_max;
  const double drift = params.lambda * dt;
  const double diffusion = params.sigma * std::sqrt(dt);

  std::vector<double> xi;
  draw_normals(rng, xi, n * d);

  Ensemble next = e;
  auto pos = next.positions();
  const auto total = static_cast<std::ptrdiff_t>(n * d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    auto idx = static_cast<std::size_t>(k);
    double x = pos[idx];
    double cj = c[idx % d];
    pos[idx] = x + drift * (cj - x) + diffusion * std::abs(x - cj) * xi[idx];
  }
  check_finite(next, dt);

  StepReport report;
  report.dt_used = dt;
  return {std::move(next), report};
}

namespace {

SeriesRow make_row(const Ensemble& e, std::size_t step, double t, double dt,
                   std::span<const double> reference, double u_power,
                   std::vector<double> consensus) {
  SeriesRow row;
  row.step = step;
  row.t = t;
  row.dt = dt;
  row.variance = ensemble_variance(e);
  row.V = weighted_moment(e, reference, 2.0);
  row.U = weighted_moment(e, reference, u_power);
  row.consensus = std::move(consensus);
  return row;
}

}  // namespace

RunRecord run_until(Ensemble e, const SimParams& params, const ConsensusRule& rule,
                    const StoppingRule& stop, Rng& rng, const RunOptions& options) {
  params.validate_for_dim(e.dim());
  const std::size_t d = e.dim();

  std::vector<double> reference = options.reference;
  if (reference.empty()) {
    if (rule.is_fixed()) {
      reference = rule.evaluate(e, params.gamma);
    } else {
      reference = rule.objective()->minimizer();
    }
  }
  if (reference.size() == 1 && d > 1) reference.assign(d, reference.front());
  if (reference.size() != d) throw ConfigError("reference point has the wrong dimension");
  const double u_power = 2.0 * params.eta + 2.0;

  Stepper stepper(params, rule);
  RunRecord record{Termination::MaxIters, 0, 0.0, {}, {}, 0, 0.0, 0, e};
  const bool keep_series = options.record_stride > 0;
  if (keep_series) {
    record.series.push_back(
        make_row(e, 0, 0.0, 0.0, reference, u_power, rule.evaluate(e, params.gamma)));
  }

  double t = 0.0;
  std::size_t n = 0;
  double last_dt = 0.0;
  std::vector<double> step_consensus;
  while (true) {
    if (ensemble_variance(e) < stop.variance_threshold) {
      record.termination = Termination::Variance;
      break;
    }
    if (n >= stop.n_max) {
      record.termination = Termination::MaxIters;
      break;
    }
    if (t >= stop.t_max * (1.0 - 1e-12)) {
      record.termination = Termination::MaxTime;
      break;
    }
    StepReport report;
    if (options.method == Method::SuperlinearMarginal) {
      report = stepper.advance(e, rng, stop.t_max - t);
      step_consensus = stepper.last_consensus();
    } else {
      // Classical CBO keeps its fixed step; only the horizon may shorten it.
      SimParams p = params;
      p.dt_max = std::min(params.dt_max, stop.t_max - t);
      if (keep_series) step_consensus = rule.evaluate(e, params.gamma);
      auto [next, r] = step_cbo(e, p, rule, rng);
      e = std::move(next);
      report = r;
    }
    t += report.dt_used;
    last_dt = report.dt_used;
    ++n;

    double product = report.dt_used * report.max_drift_factor;
    record.max_cfl_product = std::max(record.max_cfl_product, product);
    if (product > 1.0) ++record.cfl_violations;
    if (report.dt_binding == StepReport::Binding::Density) ++record.density_bound_steps;

    if (keep_series && n % options.record_stride == 0) {
      record.series.push_back(
          make_row(e, n, t, report.dt_used, reference, u_power, step_consensus));
    }
  }

  if (keep_series && record.series.back().step != n) {
    record.series.push_back(make_row(e, n, t, last_dt, reference, u_power,
                                     step_consensus.empty() ? rule.evaluate(e, params.gamma)
                                                            : step_consensus));
  }
  record.iterations = n;
  record.final_time = t;
  record.consensus = rule.evaluate(e, params.gamma);
  record.final_state = std::move(e);
  return record;
}

void write_series_csv(std::ostream& os, const RunRecord& record) {
  std::size_t d = record.consensus.size();
  os << "t,dt,variance,V,U";
  for (std::size_t j = 0; j < d; ++j) os << ",x_gamma_" << j;
  os << '\n';
  auto old = os.precision(17);
  for (const auto& row : record.series) {
    os << row.t << ',' << row.dt << ',' << row.variance << ',' << row.V << ',' << row.U;
    for (double c : row.consensus) os << ',' << c;
    os << '\n';
  }
  os.precision(old);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Variance:
      return "variance";
    case Termination::MaxIters:
      return "max_iters";
    case Termination::MaxTime:
      return "max_time";
  }
  return "unknown";
}

}  // namespace slcbo
