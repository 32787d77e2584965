// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N[,N...]] [--full]
//
// --full adds the N = 1e5 iteration-count run against the reference counts.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slcbo/analysis.hpp"
#include "slcbo/consensus.hpp"
#include "slcbo/density.hpp"
#include "slcbo/dynamics.hpp"
#include "slcbo/ensemble.hpp"
#include "slcbo/harness.hpp"
#include "slcbo/objectives.hpp"

using namespace slcbo;
namespace an = slcbo::analysis;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Box kBox{-3.0, 3.0};

Ensemble uniform_start(std::size_t dim, std::size_t n, double mass, Box box, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return init_ensemble(dim, n, mass, InitDistribution::uniform(box), rng);
}

// 1 ------------------------------------------------------------------------

Outcome beta_zero_reduction() {
  std::string detail;
  for (std::size_t d : {std::size_t{1}, std::size_t{5}}) {
    Objective f = make_objective("rastrigin", d);
    SimParams p = default_bench_params(BenchMethod::SlCbo);
    p.beta = 0.0;
    p.profile = CoefficientProfile::consensus_distance();
    p.domain = f.box();
    auto rule = ConsensusRule::laplace(f);

    Ensemble a = uniform_start(d, 100, 1.0, f.box(), 11 + d);
    Ensemble b = a;
    Rng ra = make_rng(99), rb = make_rng(99);
    for (int step = 0; step < 50; ++step) {
      auto [na, sa] = step_marginal(a, p, rule, ra);
      auto [nb, sb] = step_cbo(b, p, rule, rb);
      auto pa = na.positions(), pb = nb.positions();
      if (std::memcmp(pa.data(), pb.data(), pa.size() * sizeof(double)) != 0 ||
          sa.dt_used != sb.dt_used) {
        return {false, fmt("d=%zu: trajectories differ at step %d", d, step + 1)};
      }
      a = std::move(na);
      b = std::move(nb);
    }
    detail += fmt("d=%zu bitwise over 50 steps; ", d);
  }
  return {true, detail};
}

// 2 ------------------------------------------------------------------------

Outcome variance_decay() {
  SimParams p;
  p.lambda = 1.0;
  p.sigma = 0.5;
  p.beta = 0.0;
  p.dt_max = 0.005;
  p.profile = CoefficientProfile::consensus_distance();
  auto rule = ConsensusRule::fixed({0.0});
  Ensemble e = uniform_start(1, 10000, 1.0, kBox, 2);
  Rng rng = make_rng(202);
  StoppingRule stop;
  stop.t_max = 2.0;
  auto rec = run_until(std::move(e), p, rule, stop, rng);

  std::vector<double> t, lv;
  for (const auto& row : rec.series) {
    t.push_back(row.t);
    lv.push_back(std::log(row.V));
  }
  double rate = oracle::slope(t, lv);
  double target = p.sigma * p.sigma - 2.0 * p.lambda;
  bool ok = std::abs(rate - target) <= 0.15 * std::abs(target);
  return {ok, fmt("fitted rate %.4f vs %.2f (+/-15%%), %zu samples", rate, target, t.size())};
}

// 3 ------------------------------------------------------------------------

// Mean of f over [a, b], 4-point Gauss-Legendre.
double bin_mean(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};
  double m = 0.5 * (a + b), h = 0.5 * (b - a), s = 0.0;
  for (int k = 0; k < 4; ++k) s += w[k] * f(m + h * x[k]);
  return 0.5 * s;
}

Outcome steady_state_consistency() {
  const double rho = 1.0;
  const std::size_t n = 100000;
  std::string detail;
  bool ok = true;
  for (double alpha : {0.25, 2.25}) {
    SimParams p;
    p.lambda = 1.0;
    p.sigma = 0.5;
    p.beta = 1.0;
    p.alpha = alpha;
    p.eta = 0.0;
    p.dt_max = 0.005;
    p.n_bins = 1001;
    p.profile = CoefficientProfile::power_to_min({0.0});
    auto rule = ConsensusRule::fixed({0.0});

    auto spec = an::SteadyStateSpec::for_particle_noise(1.0, p.sigma, 1.0, alpha, 0.0, 0.0, 1.0);
    spec.C = an::solve_constant_for_mass(rho, spec);
    auto f = [&spec](double x) { return an::steady_state_density(x, spec); };
    auto grid = make_grid(kBox.lo, kBox.hi, p.n_bins);

    double sum = 0.0;
    std::string per_seed;
    for (std::uint64_t seed : {1, 2, 3}) {
      Ensemble e = uniform_start(1, n, rho, kBox, seed);
      Rng rng = make_rng(seed + 1000);
      StoppingRule stop;
      stop.t_max = 10.0;
      RunOptions opts;
      opts.record_stride = 0;
      auto rec = run_until(std::move(e), p, rule, stop, rng, opts);
      auto h = build_marginal_histogram(rec.final_state, 0, grid);
      double dx = grid.bin_width(), l1 = 0.0;
      for (std::size_t k = 0; k < grid.n_bins(); ++k) {
        double lo = grid.center(k) - 0.5 * dx;
        l1 += std::abs(h.values()[k] - bin_mean(f, lo, lo + dx)) * dx;
      }
      sum += l1;
      per_seed += fmt(" %.4f", l1);
    }
    double mean = sum / 3.0;
    ok = ok && mean < 0.05 * rho;
    detail += fmt("alpha %.2f: C %.5f, L1%s, mean %.4f (< %.3f); ", alpha, spec.C,
                  per_seed.c_str(), mean, 0.05 * rho);
  }
  return {ok, detail};
}

// 4 ------------------------------------------------------------------------

Outcome critical_mass_checks() {
  std::string detail;
  bool ok = true;

  int grid_bad = 0, cases = 0;
  for (double beta : {0.25, 0.5, 1.0, 2.0, 3.0, 10.0}) {
    for (double alpha : {0.25, 0.5, 1.0, 1.5, 2.0, 2.25, 3.0}) {
      ++cases;
      double cm = an::critical_constant(beta, alpha);
      if (cm != std::pow(beta, -1.0 / alpha)) ++grid_bad;
    }
  }
  // Exactly representable cases.
  if (an::critical_constant(4.0, 2.0) != 0.5) ++grid_bad;
  if (an::critical_constant(0.125, 3.0) != 2.0) ++grid_bad;
  if (an::critical_constant(1.0, 2.25) != 1.0) ++grid_bad;
  ok = ok && grid_bad == 0;
  detail += fmt("C_M grid %d/%d exact; ", cases + 3 - grid_bad, cases + 3);

  an::SteadyStateSpec s{1.0, 0.5, 1.0, 2.25, 0.0, 0.0, 1.0};
  auto adaptive = an::critical_mass(s);
  auto trap = oracle::critical_mass_trapezoid(oracle::CriticalProfile{1.0, 0.25, 1.0, 2.25}, 4.0,
                                              16);
  double gap = std::abs(adaptive.value - trap.value);
  bool agree = adaptive.finite && gap <= adaptive.error + trap.error;
  ok = ok && agree;
  detail += fmt("rho_c adaptive %.8f (+/-%.1e) vs trapezoid %.8f (+/-%.1e); ", adaptive.value,
                adaptive.error, trap.value, trap.error);

  s.alpha = 1.5;
  auto div = an::critical_mass(s);
  bool growing = !div.finite && div.levels.size() > 3;
  for (std::size_t i = 1; i < div.levels.size(); ++i) {
    growing = growing && div.levels[i] > div.levels[i - 1];
  }
  ok = ok && growing;
  detail += fmt("alpha 1.5: %zu levels, %.3g -> %.3g, %s", div.levels.size(), div.levels.front(),
                div.levels.back(), growing ? "monotone divergence" : "NOT divergent");
  return {ok, detail};
}

// 5 ------------------------------------------------------------------------

std::size_t iterations_to_t15(double alpha, std::size_t n, std::uint64_t seed) {
  static const Objective parabola = make_natural_objective("parabola", 1);
  SimParams p;
  p.lambda = 1.0;
  p.sigma = 0.5;
  p.beta = 1.0;
  p.alpha = alpha;
  p.gamma = 50.0;
  p.dt_max = 0.005;
  p.n_bins = 201;
  p.profile = CoefficientProfile::consensus_distance();
  auto rule = ConsensusRule::laplace_density(parabola, make_grid(kBox.lo, kBox.hi, p.n_bins));
  Ensemble e = uniform_start(1, n, 1.0, kBox, seed);
  Rng rng = make_rng(seed + 500);
  StoppingRule stop;
  stop.t_max = 15.0;
  RunOptions opts;
  opts.record_stride = 0;
  auto rec = run_until(std::move(e), p, rule, stop, rng, opts);
  if (rec.cfl_violations != 0) throw NumericalError("CFL bound violated");
  return rec.iterations;
}

Outcome iteration_trend() {
  const std::array<double, 6> alphas{0.25, 0.5, 1.0, 1.5, 2.0, 2.25};
  std::vector<std::size_t> counts;
  for (double a : alphas) counts.push_back(iterations_to_t15(a, 10000, 5));
  bool ok = counts[0] == 3000 && counts[1] == 3000 && counts[2] == 3000 &&
            counts[3] < counts[4] && counts[4] < counts[5];
  std::string detail = "N=1e4 counts";
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    detail += fmt(" %.2f:%zu", alphas[k], counts[k]);
  }
  return {ok, detail};
}

Outcome iteration_counts_full() {
  const std::array<double, 3> alphas{1.5, 2.0, 2.25};
  const std::array<double, 3> reference{5120, 26940, 63583};
  bool ok = true;
  std::string detail = "N=1e5 counts";
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    auto c = static_cast<double>(iterations_to_t15(alphas[k], 100000, 5));
    ok = ok && std::abs(c - reference[k]) <= 0.25 * reference[k];
    detail += fmt(" %.2f:%.0f (ref %.0f)", alphas[k], c, reference[k]);
  }
  return {ok, detail};
}

// 6 ------------------------------------------------------------------------

Outcome superlinear_acceleration() {
  static const Objective parabola = make_natural_objective("parabola", 1);
  const double rho = 12.0;
  double v_sl = 0.0, v_cbo = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (double beta : {1.0, 0.0}) {
      SimParams p;
      p.lambda = 1.0;
      p.sigma = 0.5;
      p.beta = beta;
      p.alpha = 0.25;
      p.gamma = 50.0;
      p.dt_max = 0.05;
      p.n_bins = 201;
      p.profile = CoefficientProfile::consensus_distance();
      auto rule = ConsensusRule::laplace_density(parabola, make_grid(kBox.lo, kBox.hi, p.n_bins));
      Ensemble e = uniform_start(1, 100000, rho, kBox, seed);
      Rng rng = make_rng(seed + 700);
      StoppingRule stop;
      stop.t_max = 15.0;
      RunOptions opts;
      opts.record_stride = 0;
      auto rec = run_until(std::move(e), p, rule, stop, rng, opts);
      double v = weighted_moment(rec.final_state, std::vector<double>{0.0}, 2.0);
      (beta > 0 ? v_sl : v_cbo) += v / 10.0;
    }
  }
  double ratio = v_cbo / v_sl;
  return {ratio >= 10.0,
          fmt("mean V(15): beta=1 %.3e, beta=0 %.3e, ratio %.3g (>= 10)", v_sl, v_cbo, ratio)};
}

// 7 ------------------------------------------------------------------------

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Outcome consensus_properties() {
  oracle::Gen gen(77);

  int shift_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = gen.index(1, 200), d = gen.index(1, 4);
    std::vector<double> pos(n * d);
    for (auto& x : pos) x = static_cast<double>(static_cast<int>(gen.index(0, 96)) - 48) / 16.0;
    Ensemble e(n, d, 1.0, pos);
    auto a = consensus_point(e, sum_sq, 10.0);
    auto b = consensus_point(e, [](std::span<const double> x) { return sum_sq(x) + 1000.0; }, 10.0);
    if (std::memcmp(a.coords.data(), b.coords.data(), d * sizeof(double)) != 0) ++shift_bad;
  }

  int hull_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = gen.index(1, 80);
    double gamma = std::pow(10.0, gen.uniform(-2, 4));
    auto pos = gen.uniform_vec(2 * n, -5, 5);
    auto c = consensus_point(Ensemble(n, 2, 1.0, pos), sum_sq, gamma).coords;
    std::vector<oracle::Pt> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({pos[2 * i], pos[2 * i + 1]});
    if (!oracle::in_hull(oracle::hull(pts), {c[0], c[1]}, 1e-12)) ++hull_bad;
  }

  // Distance to the best particle shrinks monotonically when that particle is
  // extreme (offsets and F-gaps comonotone); the Gibbs mean of F is
  // non-increasing in gamma for every ensemble.
  int sharpen_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = gen.index(2, 100);
    auto pos = gen.uniform_vec(n, -3, 3);
    Ensemble e(n, 1, 1.0, pos);
    double best = *std::min_element(pos.begin(), pos.end());
    double m = best - gen.uniform(0.0, 1.0);
    auto f = [m](std::span<const double> x) { return (x[0] - m) * (x[0] - m); };
    double last_dist = std::numeric_limits<double>::infinity();
    double last_mean = std::numeric_limits<double>::infinity();
    for (double gamma : {1.0, 10.0, 100.0, 1000.0}) {
      double dist = std::abs(consensus_point(e, f, gamma).coords[0] - best);
      double fmin = f(std::span<const double>(&best, 1)), num = 0.0, den = 0.0;
      for (double x : pos) {
        double v = f(std::span<const double>(&x, 1));
        double w = std::exp(-gamma * (v - fmin));
        num += v * w;
        den += w;
      }
      double mean = num / den;
      if (dist > last_dist || mean > last_mean * (1 + 1e-12)) ++sharpen_bad;
      last_dist = dist;
      last_mean = mean;
    }
  }
  bool ok = shift_bad == 0 && hull_bad == 0 && sharpen_bad == 0;
  return {ok, fmt("shift mismatches %d/100, hull escapes %d/1000, non-monotone sharpening %d/100",
                  shift_bad, hull_bad, sharpen_bad)};
}

// 8 ------------------------------------------------------------------------

Outcome benchmark_smoke() {
  const std::size_t dim = 20, n_sim = 50;
  std::vector<Objective> suite{make_objective("sphere", dim), make_objective("rastrigin", dim)};
  CompareSettings cs;
  cs.particle_counts = {200};
  cs.n_sim = n_sim;
  cs.base_seed = 2024;
  auto report = compare_methods(suite, cs);

  auto find = [&report](const std::string& obj, BenchMethod m) -> const BenchRow& {
    for (const auto& r : report.rows) {
      if (r.objective == obj && r.method == m) return r;
    }
    throw std::runtime_error("missing row " + obj);
  };
  bool ok = true;
  std::string detail;
  for (const auto& f : suite) {
    const auto& sl = find(f.name(), BenchMethod::SlCbo);
    const auto& cbo = find(f.name(), BenchMethod::Cbo);
    if (f.name() == "sphere") ok = ok && cbo.success_rate >= 0.9;
    ok = ok && sl.success_rate >= cbo.success_rate - 0.05 && sl.cfl_violations == 0;
    detail += fmt("%s: CBO %.2f, SL-CBO %.2f, SL-CBO CFL violations %zu, n_avg %.0f/%.0f; ",
                  f.name().c_str(), cbo.success_rate, sl.success_rate, sl.cfl_violations, sl.n_avg,
                  cbo.n_avg);
  }
  return {ok, detail};
}

// 9 ------------------------------------------------------------------------

Outcome blowup_identities() {
  int bad = 0, total = 0;
  auto check = [&bad, &total](bool c) {
    ++total;
    if (!c) ++bad;
  };

  check(an::blowup_time_V(3.0, 1.0, 1.0, 1.0, 0.0) == 0.0);
  auto k3 = an::blowup_constants(3.0);
  check(k3.c_alpha == 6.0);
  check(std::abs(k3.d_alpha - std::cbrt(4.0 / 3.0)) <= 1e-15);
  check(std::abs(std::pow(k3.d_alpha, 3) * k3.c_alpha * 1.0 - 8.0) <= 1e-14);
  // Doubling rho divides the time by 2^(3 alpha / 2); exact where that is a power of two.
  for (double alpha : {4.0, 6.0}) {
    double t1 = an::blowup_time_V(alpha, 1.0, 1.0, 1.0, 0.7);
    double t2 = an::blowup_time_V(alpha, 1.0, 1.0, 2.0, 0.7);
    check(t1 / t2 == std::exp2(1.5 * alpha));
  }
  for (double alpha : {2.5, 3.0, 5.5}) {
    double t1 = an::blowup_time_V(alpha, 1.3, 0.8, 1.7, 0.4);
    double t2 = an::blowup_time_V(alpha, 1.3, 0.8, 3.4, 0.4);
    check(std::abs(t1 / t2 / std::exp2(1.5 * alpha) - 1.0) <= 4e-16);
  }

  check(an::blowup_time_U(3.0, 0.0, 1.0, 1.0, 0.5, 0.0, 1.0, 1.0) == 0.0);
  auto k0 = an::blowup_constants(3.0, 0.1, 1.0, 1.0, 0.0, 0.8, 1.0);
  check(k0.xi == 0.0);
  auto t = an::blowup_time_U(3.0, 0.1, 1.0, 1.0, 0.0, 0.4, 0.8, 1.0);
  check(t.has_value() && *t == 2.0 * std::pow(0.4, 1.5) / (3.0 * k0.theta));
  auto kb = an::blowup_constants(4.0, 0.0, 1.0, 1.0, 1.0, 0.9, 1.0);
  check(kb.xi == 1.0);
  check(!an::blowup_time_U(4.0, 0.0, 1.0, 1.0, 1.0, kb.theta, 0.9, 1.0).has_value());

  check(an::supercritical_mass_check(1e-12, 1.0, 3.0, 0.0, 2.0, 0.0));
  double threshold = std::pow(std::pow(0.5, 0.5) * 1.5 / 2.0, 2.0 / 3.0);
  check(!an::supercritical_mass_check(threshold, 0.5, 3.0, 0.0, 2.0, 1.5));
  bool seen = false, monotone = true;
  for (double rho = 0.01; rho < 5; rho *= 1.05) {
    bool now = an::supercritical_mass_check(rho, 0.5, 3.0, 0.0, 2.0, 1.5);
    monotone = monotone && (!seen || now);
    seen = seen || now;
  }
  check(monotone && seen);
  return {bad == 0, fmt("%d/%d identities hold", total - bad, total)};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  bool full = false;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--full") {
      full = true;
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: %s [--only N[,N...]] [--full]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "beta = 0 reduction to CBO", beta_zero_reduction},
      {2, "variance decay rate", variance_decay},
      {3, "steady-state consistency", steady_state_consistency},
      {4, "critical constant and mass", critical_mass_checks},
      {5, "iteration-count trend", iteration_trend},
      {6, "superlinear acceleration", superlinear_acceleration},
      {7, "consensus-point properties", consensus_properties},
      {8, "benchmark protocol smoke", benchmark_smoke},
      {9, "blow-up predictor arithmetic", blowup_identities},
  };

  int failed = 0;
  auto report = [&failed](const std::string& label, const char* name, Outcome (*run)()) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %s: %s  %s [%.1fs] %s\n", label.c_str(), o.pass ? "PASS" : "FAIL",
                name, secs, o.detail.c_str());
    std::fflush(stdout);
  };

  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    report(std::to_string(c.id), c.name, c.run);
  }
  if (full) report("5-full", "iteration counts at N = 1e5", iteration_counts_full);
  return failed == 0 ? 0 : 1;
}
