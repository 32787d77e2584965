// slcbo command-line front end.
//
//   slcbo simulate-1d   particle run of the 1-D dynamics, series CSV
//   slcbo optimize      single optimization run in d dimensions
//   slcbo steady-state  analytic steady profile as (x, f) CSV
//   slcbo benchmark     SL-CBO vs CBO comparison on the standard suite
//
// Every subcommand accepts --config file.json whose keys are the long flag
// names; flags given on the command line win.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "slcbo/analysis.hpp"
#include "slcbo/density.hpp"
#include "slcbo/dynamics.hpp"
#include "slcbo/ensemble.hpp"
#include "slcbo/harness.hpp"
#include "slcbo/objectives.hpp"
#include "slcbo/rng.hpp"

namespace {

using nlohmann::json;

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Fill options that were not given on the command line from a JSON object.
void apply_config(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CLI::ValidationError("--config", path + ": " + e.what());
  }
  if (!cfg.is_object()) throw CLI::ValidationError("--config", path + ": expected a JSON object");

  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "' in " + path);
    }
    if (opt->count() > 0 || key == "config") continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(json_scalar(item));
    } else {
      opt->add_result(json_scalar(value));
    }
    opt->run_callback();
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct Simulate1d {
  double alpha = 0.25;
  double beta = 1.0;
  double eta = 0.0;
  double rho = 1.0;
  double sigma2 = 0.25;
  double lambda = 1.0;
  double gamma = 50.0;
  double halfwidth = 3.0;
  std::size_t n_particles = 10000;
  int n_bins = 201;
  double t_final = 10.0;
  double dt_max = 0.005;
  std::string dt_mode = "adaptive";
  std::optional<double> fixed_consensus;
  std::string h_kind;
  std::string k_kind;
  std::uint64_t seed = 0;
  std::size_t stride = 1;
  std::string out = "series.csv";
  std::string histogram;
  std::string consensus = "particles";
};

int run_simulate_1d(const Simulate1d& o) {
  slcbo::SimParams p;
  p.lambda = o.lambda;
  p.sigma = std::sqrt(o.sigma2);
  p.beta = o.beta;
  p.alpha = o.alpha;
  p.gamma = o.gamma;
  p.eta = o.eta;
  p.domain = slcbo::symmetric_box(o.halfwidth);
  p.dt_max = o.dt_max;
  p.n_bins = o.n_bins;
  p.seed = o.seed;
  p.dt_mode = o.dt_mode == "fixed-cap" ? slcbo::DtMode::FixedCap : slcbo::DtMode::Adaptive;
  if (o.dt_mode != "adaptive" && o.dt_mode != "fixed-cap") {
    throw slcbo::ConfigError("--dt-mode must be adaptive or fixed-cap");
  }

  // With a fixed consensus point the default is the weighted profile
  // H = |x - x*|^eta, K = H^(2 alpha) about that point; otherwise classical
  // noise around the consensus point of F(x) = x^2.
  const bool fixed = o.fixed_consensus.has_value();
  p.profile.h = slcbo::parse_h_kind(
      !o.h_kind.empty() ? o.h_kind : (fixed ? "power-to-min" : "dist-to-consensus"));
  p.profile.k = slcbo::parse_k_kind(!o.k_kind.empty() ? o.k_kind : (fixed ? "h-pow-2alpha" : "unit"));
  p.profile.reference = {fixed ? *o.fixed_consensus : 0.0};
  p.validate_for_dim(1);

  slcbo::Objective parabola = slcbo::make_natural_objective("parabola", 1);
  if (o.consensus != "particles" && o.consensus != "density") {
    throw slcbo::ConfigError("--consensus must be particles or density");
  }
  auto rule = fixed ? slcbo::ConsensusRule::fixed({*o.fixed_consensus})
              : o.consensus == "density"
                  ? slcbo::ConsensusRule::laplace_density(
                        parabola, slcbo::make_grid(p.domain.lo, p.domain.hi, p.n_bins))
                  : slcbo::ConsensusRule::laplace(parabola);

  slcbo::Rng rng = slcbo::make_rng(o.seed);
  auto e = slcbo::init_ensemble(1, o.n_particles, o.rho,
                                slcbo::InitDistribution::uniform(p.domain), rng);
  slcbo::StoppingRule stop;
  stop.t_max = o.t_final;
  slcbo::RunOptions opts;
  opts.reference = {fixed ? *o.fixed_consensus : 0.0};
  opts.record_stride = o.stride;
  auto record = slcbo::run_until(std::move(e), p, rule, stop, rng, opts);

  auto out = open_output(o.out);
  slcbo::write_series_csv(out, record);
  if (!o.histogram.empty()) {
    auto grid = slcbo::make_grid(p.domain.lo, p.domain.hi, p.n_bins);
    auto hist = open_output(o.histogram);
    slcbo::write_density_csv(hist, slcbo::build_marginal_histogram(record.final_state, 0, grid));
  }
  double v_final = slcbo::weighted_moment(record.final_state, opts.reference, 2.0);
  std::cerr << "steps " << record.iterations << ", t " << record.final_time << ", V "
            << v_final << ", density-bound steps " << record.density_bound_steps
            << ", cfl violations " << record.cfl_violations << '\n';
  return 0;
}

struct Optimize {
  std::string objective = "rastrigin";
  std::size_t dim = 20;
  std::size_t n_particles = 200;
  std::string method = "slcbo";
  double alpha = 0.25;
  double beta = 1.0;
  double gamma = 50.0;
  double lambda = 1.0;
  double sigma = 5.0;
  double rho = 1.0;
  double dt_max = 0.05;
  int n_bins = 201;
  std::size_t max_iters = 10000;
  double variance_threshold = 1e-2;
  double t_max = std::numeric_limits<double>::infinity();
  double delta = 0.25;
  std::uint64_t seed = 0;
  std::string out;
};

int run_optimize(const Optimize& o) {
  auto method = slcbo::parse_bench_method(o.method);
  auto objective = slcbo::make_objective(o.objective, o.dim);
  slcbo::SimParams p = slcbo::default_bench_params(method);
  p.alpha = o.alpha;
  if (method == slcbo::BenchMethod::SlCbo) p.beta = o.beta;
  p.gamma = o.gamma;
  p.lambda = o.lambda;
  p.sigma = o.sigma;
  p.dt_max = o.dt_max;
  p.n_bins = o.n_bins;
  p.domain = objective.box();
  p.seed = o.seed;

  slcbo::Rng rng = slcbo::make_rng(o.seed);
  auto e = slcbo::init_ensemble(o.dim, o.n_particles, o.rho,
                                slcbo::InitDistribution::uniform(objective.box()), rng);
  slcbo::StoppingRule stop{o.t_max, o.max_iters, o.variance_threshold};
  slcbo::RunOptions opts;
  opts.method = method == slcbo::BenchMethod::SlCbo ? slcbo::Method::SuperlinearMarginal
                                                    : slcbo::Method::ClassicalCbo;
  opts.record_stride = o.out.empty() ? 0 : 1;
  auto record = slcbo::run_until(std::move(e), p, slcbo::ConsensusRule::laplace(objective), stop,
                                 rng, opts);
  if (!o.out.empty()) {
    auto out = open_output(o.out);
    slcbo::write_series_csv(out, record);
  }

  const auto& xs = objective.minimizer();
  double l2 = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    l2 += (record.consensus[j] - xs[j]) * (record.consensus[j] - xs[j]);
  }
  json summary = {
      {"objective", o.objective},
      {"method", o.method},
      {"termination", slcbo::to_string(record.termination)},
      {"iterations", record.iterations},
      {"final_time", record.final_time},
      {"l2_error", std::sqrt(l2)},
      {"f_value", objective(record.consensus)},
      {"success", slcbo::success_check(record.consensus, xs, o.delta)},
      {"cfl_violations", record.cfl_violations},
      {"consensus", record.consensus},
      {"params", slcbo::params_to_json(p)},
  };
  std::cout << summary.dump(2) << '\n';
  return 0;
}

struct SteadyState {
  double alpha = 0.25;
  double beta = 1.0;
  double eta = 0.0;
  double lambda = 1.0;
  double sigma2 = 0.25;
  double center = 0.0;
  std::optional<double> rho;
  std::optional<double> constant;
  std::string noise = "particle";
  double x_min = -3.0;
  double x_max = 3.0;
  std::size_t points = 1001;
  std::string out = "steady.csv";
};

int run_steady_state(const SteadyState& o) {
  namespace an = slcbo::analysis;
  if (o.noise != "particle" && o.noise != "formula") {
    throw slcbo::ConfigError("--noise must be particle or formula");
  }
  double sigma = std::sqrt(o.sigma2);
  an::SteadyStateSpec spec =
      o.noise == "particle"
          ? an::SteadyStateSpec::for_particle_noise(o.lambda, sigma, o.beta, o.alpha, o.eta,
                                                    o.center, 1.0)
          : an::SteadyStateSpec{o.lambda, sigma, o.beta, o.alpha, o.eta, o.center, 1.0};
  if (o.constant && o.rho) throw slcbo::ConfigError("give either --C or --rho, not both");
  if (o.constant) {
    spec.C = *o.constant;
  } else {
    spec.C = an::solve_constant_for_mass(o.rho.value_or(1.0), spec);
  }
  if (o.points < 2) throw slcbo::ConfigError("--points must be at least 2");

  auto out = open_output(o.out);
  out.precision(17);
  out << "x,f\n";
  for (std::size_t k = 0; k < o.points; ++k) {
    double x = o.x_min + (o.x_max - o.x_min) * static_cast<double>(k) /
                             static_cast<double>(o.points - 1);
    out << x << ',' << an::steady_state_density(x, spec) << '\n';
  }

  double cm = an::critical_constant(o.beta, o.alpha);
  std::cerr << "C " << spec.C << ", C_M " << cm;
  if (o.beta > 0) {
    auto rc = an::critical_mass(spec);
    if (rc.finite) {
      std::cerr << ", critical mass " << rc.value << " (+/- " << rc.error << ")";
    } else {
      std::cerr << ", critical mass infinite";
    }
  }
  std::cerr << '\n';
  return 0;
}

struct Benchmark {
  std::size_t dim = 20;
  std::vector<std::size_t> particles{50, 100, 200};
  std::size_t nsim = 200;
  std::vector<std::string> methods{"slcbo", "cbo"};
  std::vector<std::string> objectives;
  double alpha = 0.25;
  double beta = 1.0;
  double gamma = 50.0;
  double lambda = 1.0;
  double sigma = 5.0;
  double rho = 1.0;
  double dt_max = 0.05;
  int n_bins = 201;
  double delta = 0.25;
  std::size_t max_iters = 10000;
  double variance_threshold = 1e-2;
  std::uint64_t seed = 0;
  std::string out = "report.json";
};

int run_benchmark(const Benchmark& o) {
  slcbo::CompareSettings s;
  for (auto* p : {&s.slcbo, &s.cbo}) {
    p->alpha = o.alpha;
    p->gamma = o.gamma;
    p->lambda = o.lambda;
    p->sigma = o.sigma;
    p->dt_max = o.dt_max;
    p->n_bins = o.n_bins;
  }
  s.slcbo.beta = o.beta;
  s.particle_counts = o.particles;
  s.methods.clear();
  for (const auto& m : o.methods) s.methods.push_back(slcbo::parse_bench_method(m));
  s.n_sim = o.nsim;
  s.base_seed = o.seed;
  s.mass = o.rho;
  s.delta = o.delta;
  s.stop = {std::numeric_limits<double>::infinity(), o.max_iters, o.variance_threshold};

  std::vector<slcbo::Objective> suite;
  if (o.objectives.empty()) {
    suite = slcbo::standard_suite(o.dim);
  } else {
    for (const auto& name : o.objectives) suite.push_back(slcbo::make_objective(name, o.dim));
  }

  auto report = slcbo::compare_methods(suite, s);
  auto out = open_output(o.out);
  out << slcbo::report_to_json(report).dump(2) << '\n';
  for (const auto& r : report.rows) {
    std::cerr << r.objective << ' ' << slcbo::to_string(r.method) << " N=" << r.n_particles
              << " success " << r.success_rate << " n_avg " << r.n_avg
              << (r.flagged ? " *" : "") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensus-based optimization with superlinear drift"};
  app.require_subcommand(1);

  Simulate1d sim;
  std::string sim_config;
  auto* s1 = app.add_subcommand("simulate-1d", "Particle run of the 1-D dynamics");
  s1->add_option("--config", sim_config, "JSON file with defaults for these flags");
  s1->add_option("--alpha", sim.alpha, "Density exponent")->capture_default_str();
  s1->add_option("--beta", sim.beta, "Superlinear coupling")->capture_default_str();
  s1->add_option("--eta", sim.eta, "Exponent of H = |x - x*|^eta")->capture_default_str();
  s1->add_option("--rho", sim.rho, "Total mass")->capture_default_str();
  s1->add_option("--sigma2", sim.sigma2, "Squared noise amplitude")->capture_default_str();
  s1->add_option("--lambda", sim.lambda, "Drift rate")->capture_default_str();
  s1->add_option("--gamma", sim.gamma, "Laplace sharpness")->capture_default_str();
  s1->add_option("--domain-halfwidth", sim.halfwidth, "Box is [-L, L]")->capture_default_str();
  s1->add_option("--n-particles", sim.n_particles)->capture_default_str();
  s1->add_option("--n-bins", sim.n_bins, "Odd histogram bin count")->capture_default_str();
  s1->add_option("--t-final", sim.t_final)->capture_default_str();
  s1->add_option("--dt-max", sim.dt_max)->capture_default_str();
  s1->add_option("--dt-mode", sim.dt_mode, "adaptive or fixed-cap")->capture_default_str();
  s1->add_option("--fixed-consensus", sim.fixed_consensus, "Hold x_gamma at this point");
  s1->add_option("--h-kind", sim.h_kind, "unit, power-to-min or dist-to-consensus");
  s1->add_option("--k-kind", sim.k_kind, "unit or h-pow-2alpha");
  s1->add_option("--seed", sim.seed)->capture_default_str();
  s1->add_option("--stride", sim.stride, "Keep every k-th step in the series")
      ->capture_default_str();
  s1->add_option("--out", sim.out, "Series CSV")->capture_default_str();
  s1->add_option("--histogram", sim.histogram, "Final histogram CSV");
  s1->add_option("--consensus", sim.consensus,
                 "particles: Laplace average of the particles; density: of the histogram")
      ->capture_default_str();

  Optimize opt;
  std::string opt_config;
  auto* s2 = app.add_subcommand("optimize", "Single optimization run");
  s2->add_option("--config", opt_config, "JSON file with defaults for these flags");
  s2->add_option("--objective", opt.objective)->capture_default_str();
  s2->add_option("--dim", opt.dim)->capture_default_str();
  s2->add_option("--n-particles", opt.n_particles)->capture_default_str();
  s2->add_option("--method", opt.method, "slcbo or cbo")->capture_default_str();
  s2->add_option("--alpha", opt.alpha)->capture_default_str();
  s2->add_option("--beta", opt.beta)->capture_default_str();
  s2->add_option("--gamma", opt.gamma)->capture_default_str();
  s2->add_option("--lambda", opt.lambda)->capture_default_str();
  s2->add_option("--sigma", opt.sigma)->capture_default_str();
  s2->add_option("--rho", opt.rho)->capture_default_str();
  s2->add_option("--dt-max", opt.dt_max)->capture_default_str();
  s2->add_option("--n-bins", opt.n_bins)->capture_default_str();
  s2->add_option("--max-iters", opt.max_iters)->capture_default_str();
  s2->add_option("--variance-threshold", opt.variance_threshold)->capture_default_str();
  s2->add_option("--t-max", opt.t_max);
  s2->add_option("--delta", opt.delta)->capture_default_str();
  s2->add_option("--seed", opt.seed)->capture_default_str();
  s2->add_option("--out", opt.out, "Series CSV");

  SteadyState ss;
  std::string ss_config;
  auto* s3 = app.add_subcommand("steady-state", "Analytic steady profile as CSV");
  s3->add_option("--config", ss_config, "JSON file with defaults for these flags");
  s3->add_option("--alpha", ss.alpha)->capture_default_str();
  s3->add_option("--beta", ss.beta)->capture_default_str();
  s3->add_option("--eta", ss.eta)->capture_default_str();
  s3->add_option("--lambda", ss.lambda)->capture_default_str();
  s3->add_option("--sigma2", ss.sigma2)->capture_default_str();
  s3->add_option("--center", ss.center)->capture_default_str();
  s3->add_option("--rho", ss.rho, "Mass; C is solved for (default 1)");
  s3->add_option("--C", ss.constant, "Profile constant");
  s3->add_option("--noise", ss.noise,
                 "particle: sigma2 is the particle noise; formula: sigma2 enters the "
                 "profile as written")
      ->capture_default_str();
  s3->add_option("--x-min", ss.x_min)->capture_default_str();
  s3->add_option("--x-max", ss.x_max)->capture_default_str();
  s3->add_option("--points", ss.points)->capture_default_str();
  s3->add_option("--out", ss.out)->capture_default_str();

  Benchmark bench;
  std::string bench_config;
  auto* s4 = app.add_subcommand("benchmark", "SL-CBO vs CBO on the standard suite");
  s4->add_option("--config", bench_config, "JSON file with defaults for these flags");
  s4->add_option("--dim", bench.dim)->capture_default_str();
  s4->add_option("--particles", bench.particles)->delimiter(',')->capture_default_str();
  s4->add_option("--nsim", bench.nsim)->capture_default_str();
  s4->add_option("--methods", bench.methods)->delimiter(',')->capture_default_str();
  s4->add_option("--objectives", bench.objectives, "Subset of the suite")->delimiter(',');
  s4->add_option("--alpha", bench.alpha)->capture_default_str();
  s4->add_option("--beta", bench.beta)->capture_default_str();
  s4->add_option("--gamma", bench.gamma)->capture_default_str();
  s4->add_option("--lambda", bench.lambda)->capture_default_str();
  s4->add_option("--sigma", bench.sigma)->capture_default_str();
  s4->add_option("--rho", bench.rho)->capture_default_str();
  s4->add_option("--dt-max", bench.dt_max)->capture_default_str();
  s4->add_option("--n-bins", bench.n_bins)->capture_default_str();
  s4->add_option("--delta", bench.delta)->capture_default_str();
  s4->add_option("--max-iters", bench.max_iters)->capture_default_str();
  s4->add_option("--variance-threshold", bench.variance_threshold)->capture_default_str();
  s4->add_option("--seed", bench.seed)->capture_default_str();
  s4->add_option("--out", bench.out)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (s1->parsed() && !sim_config.empty()) apply_config(*s1, sim_config);
    if (s2->parsed() && !opt_config.empty()) apply_config(*s2, opt_config);
    if (s3->parsed() && !ss_config.empty()) apply_config(*s3, ss_config);
    if (s4->parsed() && !bench_config.empty()) apply_config(*s4, bench_config);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (s1->parsed()) return run_simulate_1d(sim);
    if (s2->parsed()) return run_optimize(opt);
    if (s3->parsed()) return run_steady_state(ss);
    if (s4->parsed()) return run_benchmark(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
