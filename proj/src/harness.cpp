#include "slcbo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include "slcbo/ensemble.hpp"
#include "slcbo/rng.hpp"

namespace slcbo {

std::string to_string(BenchMethod m) { return m == BenchMethod::SlCbo ? "slcbo" : "cbo"; }

BenchMethod parse_bench_method(const std::string& name) {
  if (name == "slcbo") return BenchMethod::SlCbo;
  if (name == "cbo") return BenchMethod::Cbo;
  throw ConfigError("unknown method: " + name + " (expected slcbo or cbo)");
}

bool success_check(std::span<const double> x_gamma, std::span<const double> x_star,
                   double delta) {
  if (x_gamma.size() != x_star.size()) throw ConfigError("success check: dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < x_gamma.size(); ++j) {
    worst = std::max(worst, std::abs(x_gamma[j] - x_star[j]));
  }
  return worst < delta;
}

SimParams default_bench_params(BenchMethod method) {
  SimParams p;
  p.lambda = 1.0;
  p.sigma = 5.0;
  p.alpha = 0.25;
  p.beta = method == BenchMethod::SlCbo ? 1.0 : 0.0;
  p.gamma = 50.0;
  p.dt_max = 0.05;
  p.n_bins = 201;
  p.profile = CoefficientProfile::consensus_distance();
  return p;
}

ReplicaRecord run_replica(const Objective& objective, BenchMethod method,
                          const BenchSettings& settings, std::uint64_t seed) {
  SimParams params = settings.params;
  params.domain = objective.box();
  params.seed = seed;

  Rng rng = make_rng(seed);
  Ensemble e = init_ensemble(objective.dim(), settings.n_particles, settings.mass,
                             InitDistribution::uniform(objective.box()), rng);
  RunOptions options;
  options.method =
      method == BenchMethod::SlCbo ? Method::SuperlinearMarginal : Method::ClassicalCbo;
  options.record_stride = 0;
  RunRecord run = run_until(std::move(e), params, ConsensusRule::laplace(objective), settings.stop,
                            rng, options);

  ReplicaRecord r;
  r.objective = objective.name();
  r.method = method;
  r.seed = seed;
  r.termination = run.termination;
  r.iterations = run.iterations;
  r.consensus = run.consensus;
  const auto& xs = objective.minimizer();
  double sq = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double diff = std::abs(run.consensus[j] - xs[j]);
    r.max_error = std::max(r.max_error, diff);
    sq += diff * diff;
  }
  r.l2_error = std::sqrt(sq);
  r.f_value = objective(run.consensus);
  r.success = success_check(run.consensus, xs, settings.delta);
  r.cfl_violations = run.cfl_violations;
  return r;
}

BenchRow aggregate(std::string objective, BenchMethod method, std::size_t n_particles,
                   std::span<const ReplicaRecord> records) {
  if (records.empty()) throw ConfigError("cannot aggregate zero replicas");
  BenchRow row;
  row.objective = std::move(objective);
  row.method = method;
  row.n_particles = n_particles;
  row.n_sim = records.size();

  double l2 = 0.0, fv = 0.0, iters = 0.0, iters_ok = 0.0;
  for (const auto& r : records) {
    l2 += r.l2_error;
    fv += r.f_value;
    iters += static_cast<double>(r.iterations);
    row.cfl_violations += r.cfl_violations;
    if (r.success) {
      ++row.successes;
      iters_ok += static_cast<double>(r.iterations);
    }
  }
  const auto n = static_cast<double>(records.size());
  row.success_rate = static_cast<double>(row.successes) / n;
  row.avg_l2_error = l2 / n;
  row.avg_f_value = fv / n;
  row.n_avg = iters / n;
  if (row.successes > 0) row.n_avg_success = iters_ok / static_cast<double>(row.successes);
  return row;
}

BenchRow run_replicated(const Objective& objective, BenchMethod method,
                        const BenchSettings& settings, std::size_t n_sim, std::uint64_t base_seed,
                        std::vector<ReplicaRecord>* records_out) {
  if (n_sim < 1) throw ConfigError("need at least one replica");
  std::vector<ReplicaRecord> records(n_sim);
  std::vector<std::exception_ptr> errors(n_sim);
  const auto total = static_cast<std::ptrdiff_t>(n_sim);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    auto idx = static_cast<std::size_t>(k);
    try {
      records[idx] = run_replica(objective, method, settings, derive_seed(base_seed, idx));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }

  for (std::size_t k = 0; k < n_sim; ++k) {
    if (!errors[k]) continue;
    std::uint64_t seed = derive_seed(base_seed, k);
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& ex) {
      throw ReplicaError(seed, ex.what());
    } catch (...) {
      throw ReplicaError(seed, "unknown error");
    }
  }

  BenchRow row = aggregate(objective.name(), method, settings.n_particles, records);
  if (records_out) *records_out = std::move(records);
  return row;
}

bool outperforms(const BenchRow& slcbo, const BenchRow& cbo) {
  // 0.5 percentage points, with slack for the rate being a ratio of counts.
  constexpr double kMargin = 0.005 + 1e-12;
  if (slcbo.success_rate < cbo.success_rate - kMargin) return false;
  if (!slcbo.n_avg_success || !cbo.n_avg_success) return false;
  return *slcbo.n_avg_success < *cbo.n_avg_success;
}

BenchReport compare_methods(std::span<const Objective> suite, const CompareSettings& settings) {
  BenchReport report;
  for (const auto& objective : suite) {
    for (std::size_t n : settings.particle_counts) {
      std::optional<std::size_t> sl_row, cbo_row;
      for (BenchMethod method : settings.methods) {
        BenchSettings bs;
        bs.params = method == BenchMethod::SlCbo ? settings.slcbo : settings.cbo;
        bs.n_particles = n;
        bs.mass = settings.mass;
        bs.delta = settings.delta;
        bs.stop = settings.stop;
        report.rows.push_back(
            run_replicated(objective, method, bs, settings.n_sim, settings.base_seed));
        (method == BenchMethod::SlCbo ? sl_row : cbo_row) = report.rows.size() - 1;
      }
      if (sl_row && cbo_row) {
        report.rows[*sl_row].flagged = outperforms(report.rows[*sl_row], report.rows[*cbo_row]);
      }
    }
  }

  nlohmann::json& meta = report.meta;
  meta["suite"] = std::string(kSuiteVersion);
  meta["dim"] = suite.empty() ? 0 : suite.front().dim();
  meta["objectives"] = nlohmann::json::array();
  for (const auto& o : suite) {
    meta["objectives"].push_back(
        {{"name", o.name()}, {"box", {o.box().lo, o.box().hi}}});
  }
  meta["params"] = {{"slcbo", params_to_json(settings.slcbo)},
                    {"cbo", params_to_json(settings.cbo)}};
  meta["particle_counts"] = settings.particle_counts;
  meta["n_sim"] = settings.n_sim;
  meta["base_seed"] = settings.base_seed;
  meta["mass"] = settings.mass;
  meta["delta"] = settings.delta;
  meta["stop"] = {{"n_max", settings.stop.n_max},
                  {"variance_threshold", settings.stop.variance_threshold}};
  meta["init"] = "uniform over the search box";
  meta["assumed_defaults"] = {
      {"beta", settings.slcbo.beta},     {"gamma", settings.slcbo.gamma},
      {"mass", settings.mass},           {"n_bins", settings.slcbo.n_bins},
      {"init", "uniform"},               {"suite", std::string(kSuiteVersion)},
  };
  return report;
}

nlohmann::json params_to_json(const SimParams& p) {
  return {
      {"lambda", p.lambda},
      {"sigma", p.sigma},
      {"beta", p.beta},
      {"alpha", p.alpha},
      {"gamma", p.gamma},
      {"eta", p.eta},
      {"domain", {p.domain.lo, p.domain.hi}},
      {"dt_max", p.dt_max},
      {"dt_mode", p.dt_mode == DtMode::Adaptive ? "adaptive" : "fixed-cap"},
      {"n_bins", p.n_bins},
      {"seed", p.seed},
      {"h", to_string(p.profile.h)},
      {"k", to_string(p.profile.k)},
      {"reference", p.profile.reference},
  };
}

nlohmann::json row_to_json(const BenchRow& row) {
  nlohmann::json j = {
      {"objective", row.objective},
      {"method", to_string(row.method)},
      {"n_particles", row.n_particles},
      {"n_sim", row.n_sim},
      {"successes", row.successes},
      {"success_rate", row.success_rate},
      {"avg_l2_error", row.avg_l2_error},
      {"avg_f_value", row.avg_f_value},
      {"n_avg", row.n_avg},
      {"cfl_violations", row.cfl_violations},
      {"flagged", row.flagged},
  };
  j["n_avg_success"] = row.n_avg_success ? nlohmann::json(*row.n_avg_success) : nlohmann::json();
  return j;
}

nlohmann::json report_to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  return {{"meta", report.meta}, {"rows", rows}};
}

}  // namespace slcbo
