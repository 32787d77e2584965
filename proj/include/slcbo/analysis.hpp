#pragma once

#include <optional>
#include <vector>

namespace slcbo::analysis {

/// Parameters of the closed-form steady state
///
///   f(x) = |x - x*|^(-2 eta) C E(x) / (1 - beta C^alpha E(x)^alpha)^(1/alpha),
///   E(x) = exp(-(2 lambda / sigma^2) |x - x*|^(2(1 - eta)) / (1 - eta)).
///
/// The profile is the zero-flux state of
///   d_t f = d_x[lambda (x - x*)(1 + beta K f^alpha) f + (sigma^2 / 4) d_x(H^2 f)]
/// with H = |x - x*|^eta, K = H^(2 alpha). A particle system driven by noise
/// sigma_p H dB has diffusion sigma_p^2 / 2, so its stationary law is this
/// profile at sigma = sqrt(2) sigma_p; see for_particle_noise().
struct SteadyStateSpec {
  double lambda = 1.0;
  double sigma = 0.5;
  double beta = 1.0;
  double alpha = 0.25;
  double eta = 0.0;
  double center = 0.0;
  double C = 1.0;

  /// Spec whose profile is the stationary law of particles with noise
  /// amplitude `particle_sigma`.
  static SteadyStateSpec for_particle_noise(double lambda, double particle_sigma, double beta,
                                            double alpha, double eta, double center, double C);
};

/// C_M = beta^(-1/alpha); +inf when beta = 0.
double critical_constant(double beta, double alpha);

/// Steady profile at x. Returns +inf at x = x* when the profile is singular
/// there (eta > 0, or C = C_M). Throws DomainError when C > C_M or the
/// parameters are out of range.
double steady_state_density(double x, const SteadyStateSpec& spec);

/// Leading exponent p of the mass contained in [x* - w, x* + w] ~ w^p as
/// w -> 0; the mass integral is finite iff p > 0.
double singular_mass_exponent(const SteadyStateSpec& spec);

/// |x - x*| beyond which the exponential factor is below 1e-30.
double truncation_radius(const SteadyStateSpec& spec);

struct MassEstimate {
  double value = 0.0;
  double error = 0.0;
  bool finite = true;
  /// Window-excluded integrals, one per refinement level.
  std::vector<double> levels;
};

/// Integral of the steady profile over the real line. Singular profiles are
/// integrated outside a window |x - x*| > w that shrinks by 4x per level and
/// Richardson-extrapolated in w; iteration stops once two extrapolated values
/// agree to 1e-6 relative. Divergent integrals (exponent <= 0) come back with
/// finite = false and the growing level sequence.
MassEstimate steady_state_mass(const SteadyStateSpec& spec);

/// Mass of the profile with C = C_M (the critical mass).
MassEstimate critical_mass(SteadyStateSpec spec);

/// C in (0, C_M) with |mass(C) - rho| < 1e-8 rho, by bisection. Throws
/// DomainError when rho >= rho_c (no steady state carries that mass).
double solve_constant_for_mass(double rho, SteadyStateSpec spec);

struct BlowupConstants {
  double c_alpha = 0.0;  // 2 alpha / (alpha - 2)
  double d_alpha = 0.0;  // [2 (alpha + 1) / (c_alpha (alpha - 2))]^(1/3)
  double theta = 0.0;
  double xi = 0.0;
};

/// c_alpha, d_alpha only (alpha > 2).
BlowupConstants blowup_constants(double alpha);

/// Adds Theta and Xi from the initial moments m2 = int H^2 f0 and
/// m4 = int H^4 f0.
BlowupConstants blowup_constants(double alpha, double eta, double lambda, double beta,
                                 double sigma, double m2, double m4);

/// Time at which the V(t) bound reaches zero:
/// (c d + d^-2)^(3 alpha / 2) V0^(alpha / 2) / (2 lambda beta rho^(3 alpha / 2)).
double blowup_time_V(double alpha, double lambda, double beta, double rho, double V0);

/// Time at which the U(t) bound reaches zero:
/// 2 U0^(alpha/2) / (alpha [Theta - Xi U0^((alpha-2)/2)]). Empty when the
/// bracket is not positive (no prediction). Throws DomainError for
/// alpha <= 2 or eta >= 1/4.
std::optional<double> blowup_time_U(double alpha, double eta, double lambda, double beta,
                                    double sigma, double U0, double m2, double m4);

/// rho > (T0^((alpha-2)/2) Xi / Theta)^(2/alpha), strictly.
bool supercritical_mass_check(double rho, double T0, double alpha, double eta, double theta,
                              double xi);

}  // namespace slcbo::analysis
