#include "slcbo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slcbo/common.hpp"

namespace slcbo::analysis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWindowShrink = 4.0;
constexpr double kStopRelative = 1e-6;
constexpr int kMaxLevels = 40;
constexpr int kDivergentLevels = 12;
constexpr int kExtrapolationColumns = 3;

void check_spec(const SteadyStateSpec& s) {
  if (!(s.lambda > 0)) throw DomainError("steady state needs lambda > 0");
  if (!(s.sigma > 0)) throw DomainError("steady state needs sigma > 0");
  if (!(s.beta >= 0)) throw DomainError("steady state needs beta >= 0");
  if (!(s.alpha > 0)) throw DomainError("steady state needs alpha > 0");
  if (!(s.eta >= 0 && s.eta < 0.5)) throw DomainError("steady state needs 0 <= eta < 1/2");
  if (!(s.C > 0)) throw DomainError("steady state needs C > 0");
  if (s.C > critical_constant(s.beta, s.alpha)) {
    throw DomainError("C exceeds the critical constant C_M");
  }
}

// Exponent q in E = exp(-q) at distance r from x*.
double exponent_at(double r, const SteadyStateSpec& s) {
  double p = 2.0 * (1.0 - s.eta);
  return (2.0 * s.lambda / (s.sigma * s.sigma)) * std::pow(r, p) / (1.0 - s.eta);
}

// beta C^alpha, exactly 1 at C = C_M so the critical profile is not shifted
// by the rounding of the two powers.
double coupling(const SteadyStateSpec& s) {
  if (s.beta == 0.0) return 0.0;
  if (s.C == critical_constant(s.beta, s.alpha)) return 1.0;
  return s.beta * std::pow(s.C, s.alpha);
}

// Profile at distance r >= 0 from x*, assuming a checked spec.
double profile(double r, const SteadyStateSpec& s) {
  double q = exponent_at(r, s);
  double weight = s.eta == 0.0 ? 1.0 : std::pow(r, -2.0 * s.eta);
  double value = weight * s.C * std::exp(-q);
  if (s.beta == 0.0) return value;
  double b = coupling(s);
  // 1 - b e^{-alpha q}, written to keep digits when b is close to 1.
  double denom = (1.0 - b) - b * std::expm1(-s.alpha * q);
  if (denom <= 0.0) return kInf;
  return value / std::pow(denom, 1.0 / s.alpha);
}

bool singular_at_center(const SteadyStateSpec& s) {
  return s.eta > 0.0 || coupling(s) >= 1.0;
}

struct Panel {
  double value;
  double error;
};

Panel integrate(const SteadyStateSpec& s, double a, double b) {
  double err = 0.0;
  auto f = [&s](double r) { return profile(r, s); };
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13,
                                                                           &err);
  return {v, err};
}

}  // namespace

SteadyStateSpec SteadyStateSpec::for_particle_noise(double lambda, double particle_sigma,
                                                    double beta, double alpha, double eta,
                                                    double center, double C) {
  return SteadyStateSpec{lambda, std::sqrt(2.0) * particle_sigma, beta, alpha, eta, center, C};
}

double critical_constant(double beta, double alpha) {
  if (!(alpha > 0)) throw DomainError("critical constant needs alpha > 0");
  if (!(beta >= 0)) throw DomainError("critical constant needs beta >= 0");
  if (beta == 0.0) return kInf;
  return std::pow(beta, -1.0 / alpha);
}

double steady_state_density(double x, const SteadyStateSpec& spec) {
  check_spec(spec);
  double r = std::abs(x - spec.center);
  if (r == 0.0 && singular_at_center(spec)) return kInf;
  return profile(r, spec);
}

double singular_mass_exponent(const SteadyStateSpec& spec) {
  check_spec(spec);
  double p = 1.0 - 2.0 * spec.eta;
  if (coupling(spec) >= 1.0) {
    p -= 2.0 * (1.0 - spec.eta) / spec.alpha;
  }
  return p;
}

double truncation_radius(const SteadyStateSpec& spec) {
  check_spec(spec);
  double q = 30.0 * std::log(10.0);
  double rp = q * (1.0 - spec.eta) * spec.sigma * spec.sigma / (2.0 * spec.lambda);
  return std::pow(rp, 1.0 / (2.0 * (1.0 - spec.eta)));
}

MassEstimate steady_state_mass(const SteadyStateSpec& spec) {
  check_spec(spec);
  const double R = truncation_radius(spec);
  MassEstimate out;

  if (!singular_at_center(spec)) {
    Panel whole = integrate(spec, 0.0, R);
    out.value = 2.0 * whole.value;
    out.error = 2.0 * whole.error;
    out.levels.push_back(out.value);
    return out;
  }

  const double p = singular_mass_exponent(spec);
  const double step = 2.0 * (1.0 - spec.eta);

  // Level k integrates |x - x*| in [w_k, R], w_k = R / 4^(k+1), panel by panel.
  double w = R / kWindowShrink;
  Panel first = integrate(spec, w, R);
  double running = 2.0 * first.value;
  double quad_error = 2.0 * first.error;
  out.levels.push_back(running);

  if (p <= 0.0) {
    for (int k = 1; k < kDivergentLevels; ++k) {
      double next = w / kWindowShrink;
      Panel piece = integrate(spec, next, w);
      running += 2.0 * piece.value;
      quad_error += 2.0 * piece.error;
      out.levels.push_back(running);
      w = next;
    }
    out.finite = false;
    out.value = running;
    out.error = kInf;
    return out;
  }

  // Richardson table in w with exponents p, p + step, p + 2 step.
  std::vector<std::vector<double>> table{{running}};
  double previous = kInf;
  for (int k = 1; k < kMaxLevels; ++k) {
    double next = w / kWindowShrink;
    Panel piece = integrate(spec, next, w);
    running += 2.0 * piece.value;
    quad_error += 2.0 * piece.error;
    out.levels.push_back(running);
    w = next;

    std::vector<double> row{running};
    const auto& prev = table.back();
    for (int m = 1; m <= kExtrapolationColumns && m <= k; ++m) {
      double factor = std::pow(kWindowShrink, -(p + step * (m - 1)));
      row.push_back((row[m - 1] - factor * prev[m - 1]) / (1.0 - factor));
    }
    double estimate = row.back();
    table.push_back(std::move(row));

    if (k >= 2 && std::abs(estimate - previous) <= kStopRelative * std::abs(estimate)) {
      out.value = estimate;
      out.error = std::abs(estimate - previous) + quad_error;
      return out;
    }
    previous = estimate;
  }
  out.value = previous;
  out.error = kInf;
  return out;
}

MassEstimate critical_mass(SteadyStateSpec spec) {
  if (!(spec.beta > 0)) throw DomainError("critical mass needs beta > 0");
  spec.C = critical_constant(spec.beta, spec.alpha);
  return steady_state_mass(spec);
}

double solve_constant_for_mass(double rho, SteadyStateSpec spec) {
  if (!(rho > 0)) throw DomainError("mass must be positive");
  auto mass_at = [&spec](double c) {
    SteadyStateSpec s = spec;
    s.C = c;
    return steady_state_mass(s).value;
  };

  double lo = 0.0;
  double hi = 1.0;
  if (spec.beta > 0.0) {
    double cm = critical_constant(spec.beta, spec.alpha);
    MassEstimate rc = critical_mass(spec);
    if (rc.finite && rho >= rc.value) {
      throw DomainError("mass " + std::to_string(rho) + " is not below the critical mass " +
                        std::to_string(rc.value));
    }
    hi = cm;
    double last = 0.0;
    for (int k = 1; k <= 8; ++k) {
      double m = mass_at(cm * k / 9.0);
      if (!(m > last)) throw NumericalError("steady-state mass is not increasing in C");
      last = m;
    }
  } else {
    while (mass_at(hi) < rho) hi *= 2.0;
  }

  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double m = mass_at(mid);
    if (std::abs(m - rho) < 1e-8 * rho) return mid;
    if (m < rho) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) return mid;
  }
  return 0.5 * (lo + hi);
}

BlowupConstants blowup_constants(double alpha) {
  if (!(alpha > 2)) throw DomainError("blow-up constants need alpha > 2");
  BlowupConstants k;
  k.c_alpha = 2.0 * alpha / (alpha - 2.0);
  k.d_alpha = std::cbrt(2.0 * (alpha + 1.0) / (k.c_alpha * (alpha - 2.0)));
  return k;
}

BlowupConstants blowup_constants(double alpha, double eta, double lambda, double beta,
                                 double sigma, double m2, double m4) {
  BlowupConstants k = blowup_constants(alpha);
  double rate = 2.0 * lambda * (eta + 1.0) * beta / (k.c_alpha + 1.0 / (k.d_alpha * k.d_alpha));
  k.theta = std::pow(rate * m2, 1.5 * alpha);
  k.xi = sigma * sigma * (eta + 1.0) * (2.0 * eta + 1.0) * m4;
  return k;
}

double blowup_time_V(double alpha, double lambda, double beta, double rho, double V0) {
  BlowupConstants k = blowup_constants(alpha);
  if (!(beta > 0) || !(rho > 0) || !(lambda > 0)) {
    throw DomainError("blow-up time needs lambda, beta, rho > 0");
  }
  if (!(V0 >= 0)) throw DomainError("V(0) must be non-negative");
  double base = k.c_alpha * k.d_alpha + 1.0 / (k.d_alpha * k.d_alpha);
  return std::pow(base, 1.5 * alpha) * std::pow(V0, 0.5 * alpha) /
         (2.0 * lambda * beta * std::pow(rho, 1.5 * alpha));
}

std::optional<double> blowup_time_U(double alpha, double eta, double lambda, double beta,
                                    double sigma, double U0, double m2, double m4) {
  if (!(alpha > 2)) throw DomainError("blow-up time needs alpha > 2");
  if (!(eta >= 0 && eta < 0.25)) throw DomainError("blow-up time needs 0 <= eta < 1/4");
  if (!(U0 >= 0)) throw DomainError("U(0) must be non-negative");
  BlowupConstants k = blowup_constants(alpha, eta, lambda, beta, sigma, m2, m4);
  double bracket = k.theta - k.xi * std::pow(U0, 0.5 * (alpha - 2.0));
  if (!(bracket > 0)) return std::nullopt;
  return 2.0 * std::pow(U0, 0.5 * alpha) / (alpha * bracket);
}

bool supercritical_mass_check(double rho, double T0, double alpha, double /*eta*/, double theta,
                              double xi) {
  if (!(alpha > 2)) throw DomainError("supercritical check needs alpha > 2");
  if (xi == 0.0) return rho > 0.0;
  double threshold = std::pow(std::pow(T0, 0.5 * (alpha - 2.0)) * xi / theta, 2.0 / alpha);
  return rho > threshold;
}

}  // namespace slcbo::analysis
