#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slcbo/dynamics.hpp"
#include "slcbo/objectives.hpp"
#include "slcbo/params.hpp"

namespace slcbo {

enum class BenchMethod { SlCbo, Cbo };

std::string to_string(BenchMethod m);
BenchMethod parse_bench_method(const std::string& name);

/// max_j |x_gamma_j - x*_j| < delta.
bool success_check(std::span<const double> x_gamma, std::span<const double> x_star, double delta);

/// Outcome of one optimization run.
struct ReplicaRecord {
  std::string objective;
  BenchMethod method = BenchMethod::SlCbo;
  std::uint64_t seed = 0;
  Termination termination = Termination::MaxIters;
  std::size_t iterations = 0;
  std::vector<double> consensus;
  double max_error = 0.0;
  double l2_error = 0.0;
  double f_value = 0.0;
  bool success = false;
  std::size_t cfl_violations = 0;
};

/// Settings shared by every replica of a benchmark row.
struct BenchSettings {
  SimParams params;  // dynamics parameters for this method
  std::size_t n_particles = 200;
  double mass = 1.0;
  double delta = 0.25;
  StoppingRule stop{std::numeric_limits<double>::infinity(), 10000, 1e-2};
};

/// Default SL-CBO / CBO parameters for the d-dimensional suite runs.
SimParams default_bench_params(BenchMethod method);

/// One run: uniform start over the objective's box, Laplace consensus.
ReplicaRecord run_replica(const Objective& objective, BenchMethod method,
                          const BenchSettings& settings, std::uint64_t seed);

struct BenchRow {
  std::string objective;
  BenchMethod method = BenchMethod::SlCbo;
  std::size_t n_particles = 0;
  std::size_t n_sim = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double avg_l2_error = 0.0;
  double avg_f_value = 0.0;
  double n_avg = 0.0;
  /// Mean iterations over successful runs; empty when none succeeded.
  std::optional<double> n_avg_success;
  std::size_t cfl_violations = 0;
  /// SL-CBO row within 0.5 points of CBO while using fewer iterations.
  bool flagged = false;
};

/// A replica failed with a hard error.
class ReplicaError : public std::runtime_error {
 public:
  ReplicaError(std::uint64_t seed, const std::string& what)
      : std::runtime_error("replica with seed " + std::to_string(seed) + " failed: " + what),
        seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Aggregate per-replica records (sorted by seed index already).
BenchRow aggregate(std::string objective, BenchMethod method, std::size_t n_particles,
                   std::span<const ReplicaRecord> records);

/// n_sim independent runs with seeds base_seed ^ k, run concurrently and
/// reduced in index order. `records_out`, when given, receives every run.
BenchRow run_replicated(const Objective& objective, BenchMethod method,
                        const BenchSettings& settings, std::size_t n_sim, std::uint64_t base_seed,
                        std::vector<ReplicaRecord>* records_out = nullptr);

/// SL-CBO success within 0.5 percentage points of CBO (or better) and a
/// strictly smaller mean successful iteration count.
bool outperforms(const BenchRow& slcbo, const BenchRow& cbo);

struct BenchReport {
  std::vector<BenchRow> rows;
  nlohmann::json meta;
};

struct CompareSettings {
  SimParams slcbo = default_bench_params(BenchMethod::SlCbo);
  SimParams cbo = default_bench_params(BenchMethod::Cbo);
  std::vector<std::size_t> particle_counts{50, 100, 200};
  std::vector<BenchMethod> methods{BenchMethod::SlCbo, BenchMethod::Cbo};
  std::size_t n_sim = 200;
  std::uint64_t base_seed = 0;
  double mass = 1.0;
  double delta = 0.25;
  StoppingRule stop{std::numeric_limits<double>::infinity(), 10000, 1e-2};
};

/// Rows per (objective, N, method) with paired seeds, flagging SL-CBO rows
/// that outperform the matching CBO row.
BenchReport compare_methods(std::span<const Objective> suite, const CompareSettings& settings);

nlohmann::json params_to_json(const SimParams& p);
nlohmann::json row_to_json(const BenchRow& row);
nlohmann::json report_to_json(const BenchReport& report);

}  // namespace slcbo
