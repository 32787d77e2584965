#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slcbo/common.hpp"

namespace slcbo {

inline constexpr std::string_view kSuiteVersion = "standard-v1";

/// Per-coordinate affine map y -> natural_center + scale * (y - center),
/// taking search-box coordinates to the function's natural coordinates.
struct AffineMap {
  double natural_center = 0.0;
  double scale = 1.0;
  double center = 0.0;

  double operator()(double y) const { return natural_center + scale * (y - center); }
  double inverse(double x) const { return center + (x - natural_center) / scale; }
  bool is_identity() const { return scale == 1.0 && natural_center == center; }
};

/// Benchmark objective with its exact global minimizer.
///
/// The function itself is always defined in natural coordinates; the search
/// coordinates are related to them by `to_natural`.
class Objective {
 public:
  using NaturalFn = std::function<double(std::span<const double>)>;
  using NaturalGrad = std::function<void(std::span<const double>, std::span<double>)>;

  Objective(std::string name, std::size_t dim, NaturalFn fn, Box natural_box,
            std::vector<double> natural_minimizer, double min_value, NaturalGrad grad = {});

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  /// Search box in current coordinates.
  const Box& box() const { return box_; }
  const Box& natural_box() const { return natural_box_; }
  const AffineMap& map() const { return map_; }
  /// Global minimizer in current coordinates.
  const std::vector<double>& minimizer() const { return minimizer_; }
  double min_value() const { return min_value_; }

  /// F(A(y)). No dimension check; see evaluate().
  double operator()(std::span<const double> y) const;

  void to_natural(std::span<const double> y, std::span<double> x) const;

  bool has_gradient() const { return static_cast<bool>(grad_); }
  std::vector<double> gradient(std::span<const double> y) const;

  /// Same function, searched over `target` (every coordinate).
  Objective rescaled(Box target) const;

 private:
  std::string name_;
  std::size_t dim_;
  NaturalFn fn_;
  NaturalGrad grad_;
  Box natural_box_;
  Box box_;
  AffineMap map_;
  std::vector<double> natural_minimizer_;
  std::vector<double> minimizer_;
  double min_value_;
};

/// Checked evaluation: throws ConfigError if x has the wrong dimension.
double evaluate(const Objective& o, std::span<const double> x);

/// F composed with the affine map from `target` onto the natural domain.
Objective rescale_to_box(const Objective& o, Box target);

/// Function on its natural domain: sphere, rastrigin, ackley, griewank,
/// rosenbrock, salomon, schwefel220, parabola.
Objective make_natural_objective(std::string_view name, std::size_t dim);

/// Registry lookup: suite members come back rescaled exactly as in
/// standard_suite(); "parabola" is x^2 on [-3, 3].
Objective make_objective(std::string_view name, std::size_t dim);

std::vector<std::string> objective_names();

/// Sphere, Rastrigin, Ackley, Griewank, Rosenbrock, Salomon, Schwefel 2.20,
/// rescaled to [-3, 3]^d except Rosenbrock, which is searched on
/// [-1.5, 3]^d in its own coordinates.
std::vector<Objective> standard_suite(std::size_t dim);

}  // namespace slcbo
