#pragma once

#include <stdexcept>
#include <string>

namespace slcbo {

/// Invalid user-supplied configuration (bad counts, even bin count, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a closed-form expression.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulation produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed interval [lo, hi], applied to every coordinate of a hypercube.
struct Box {
  double lo = -3.0;
  double hi = 3.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool strictly_contains(double x) const { return x > lo && x < hi; }
  bool operator==(const Box&) const = default;
};

inline Box symmetric_box(double halfwidth) { return Box{-halfwidth, halfwidth}; }

}  // namespace slcbo
