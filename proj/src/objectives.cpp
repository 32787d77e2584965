#include "slcbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slcbo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void sphere_grad(std::span<const double> x, std::span<double> g) {
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
}

double rastrigin(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v - 10.0 * std::cos(kTwoPi * v) + 10.0;
  return s;
}

void rastrigin_grad(std::span<const double> x, std::span<double> g) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = 2.0 * x[i] + 10.0 * kTwoPi * std::sin(kTwoPi * x[i]);
  }
}

double ackley(std::span<const double> x) {
  const double d = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(kTwoPi * v);
  }
  // 20 (1 - e^{-0.2 r}) + (e - e^{mean cos}), exactly 0 at the origin.
  return -20.0 * std::expm1(-0.2 * std::sqrt(sq / d)) + (std::numbers::e - std::exp(cs / d));
}

double griewank(std::span<const double> x) {
  double sq = 0.0, prod = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return 1.0 + sq / 4000.0 - prod;
}

// For d = 1 the chained sum is empty; fall back to (1 - x)^2.
double rosenbrock(std::span<const double> x) {
  if (x.size() == 1) return (1.0 - x[0]) * (1.0 - x[0]);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double a = x[i + 1] - x[i] * x[i];
    double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

void rosenbrock_grad(std::span<const double> x, std::span<double> g) {
  std::fill(g.begin(), g.end(), 0.0);
  if (x.size() == 1) {
    g[0] = -2.0 * (1.0 - x[0]);
    return;
  }
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    double a = x[i + 1] - x[i] * x[i];
    g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
    g[i + 1] += 200.0 * a;
  }
}

double salomon(std::span<const double> x) {
  double r = std::sqrt(sphere(x));
  return 1.0 - std::cos(kTwoPi * r) + 0.1 * r;
}

double schwefel220(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

struct Entry {
  std::string_view name;
  double (*fn)(std::span<const double>);
  void (*grad)(std::span<const double>, std::span<double>);
  Box natural;
  double minimizer;  // same value in every coordinate
  bool in_suite;
};

constexpr Entry kRegistry[] = {
    {"sphere", sphere, sphere_grad, {-5.12, 5.12}, 0.0, true},
    {"rastrigin", rastrigin, rastrigin_grad, {-5.12, 5.12}, 0.0, true},
    {"ackley", ackley, nullptr, {-32.768, 32.768}, 0.0, true},
    {"griewank", griewank, nullptr, {-600.0, 600.0}, 0.0, true},
    {"rosenbrock", rosenbrock, rosenbrock_grad, {-1.5, 3.0}, 1.0, true},
    {"salomon", salomon, nullptr, {-100.0, 100.0}, 0.0, true},
    {"schwefel220", schwefel220, nullptr, {-100.0, 100.0}, 0.0, true},
    {"parabola", sphere, sphere_grad, {-3.0, 3.0}, 0.0, false},
};

const Entry& lookup(std::string_view name) {
  for (const auto& e : kRegistry) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown objective: " + std::string(name));
}

constexpr Box kSuiteBox{-3.0, 3.0};

}  // namespace

Objective::Objective(std::string name, std::size_t dim, NaturalFn fn, Box natural_box,
                     std::vector<double> natural_minimizer, double min_value, NaturalGrad grad)
    : name_(std::move(name)), dim_(dim), fn_(std::move(fn)), grad_(std::move(grad)),
      natural_box_(natural_box), box_(natural_box),
      map_{natural_box.center(), 1.0, natural_box.center()},
      natural_minimizer_(std::move(natural_minimizer)), minimizer_(natural_minimizer_),
      min_value_(min_value) {
  if (dim_ < 1) throw ConfigError("objective dimension must be at least 1");
  if (natural_minimizer_.size() != dim_) throw ConfigError("minimizer has the wrong dimension");
}

double Objective::operator()(std::span<const double> y) const {
  if (map_.is_identity()) return fn_(y);
  thread_local std::vector<double> x;
  x.resize(y.size());
  to_natural(y, x);
  return fn_(x);
}

void Objective::to_natural(std::span<const double> y, std::span<double> x) const {
  if (map_.is_identity()) {
    std::copy(y.begin(), y.end(), x.begin());
    return;
  }
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = map_(y[i]);
}

std::vector<double> Objective::gradient(std::span<const double> y) const {
  if (!grad_) throw ConfigError("objective " + name_ + " has no analytic gradient");
  std::vector<double> x(y.size()), g(y.size());
  to_natural(y, x);
  grad_(x, g);
  for (double& v : g) v *= map_.scale;
  return g;
}

Objective Objective::rescaled(Box target) const {
  if (!(target.lo < target.hi)) throw ConfigError("target box is degenerate");
  Objective out = *this;
  if (target == natural_box_) {
    out.map_ = AffineMap{natural_box_.center(), 1.0, natural_box_.center()};
  } else {
    // Composite of the current map with target -> current box.
    double step = box_.width() / target.width();
    out.map_ = AffineMap{map_.natural_center, map_.scale * step, target.center()};
  }
  out.box_ = target;
  for (std::size_t i = 0; i < dim_; ++i) out.minimizer_[i] = out.map_.inverse(natural_minimizer_[i]);
  return out;
}

double evaluate(const Objective& o, std::span<const double> x) {
  if (x.size() != o.dim()) {
    throw ConfigError("objective " + o.name() + " expects dimension " + std::to_string(o.dim()) +
                      ", got " + std::to_string(x.size()));
  }
  return o(x);
}

Objective rescale_to_box(const Objective& o, Box target) { return o.rescaled(target); }

Objective make_natural_objective(std::string_view name, std::size_t dim) {
  const Entry& e = lookup(name);
  Objective::NaturalGrad grad;
  if (e.grad) grad = e.grad;
  return Objective(std::string(e.name), dim, e.fn, e.natural,
                   std::vector<double>(dim, e.minimizer), 0.0, std::move(grad));
}

Objective make_objective(std::string_view name, std::size_t dim) {
  const Entry& e = lookup(name);
  Objective natural = make_natural_objective(name, dim);
  if (!e.in_suite || e.name == "rosenbrock") return natural;
  return natural.rescaled(kSuiteBox);
}

std::vector<std::string> objective_names() {
  std::vector<std::string> names;
  for (const auto& e : kRegistry) names.emplace_back(e.name);
  return names;
}

std::vector<Objective> standard_suite(std::size_t dim) {
  std::vector<Objective> suite;
  for (const auto& e : kRegistry) {
    if (e.in_suite) suite.push_back(make_objective(e.name, dim));
  }
  return suite;
}

}  // namespace slcbo
