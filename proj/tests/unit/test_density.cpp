#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "slcbo/density.hpp"
#include "slcbo/ensemble.hpp"

using namespace slcbo;

TEST_CASE("grid layout") {
  auto g = make_grid(-3, 3, 201);
  CHECK(g.bin_width() == doctest::Approx(6.0 / 201));
  CHECK(g.center(100) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.bin_of(0.0) == 100u);

  auto small = make_grid(-3, 3, 3);
  CHECK(small.center(0) == -2.0);
  CHECK(small.center(1) == 0.0);
  CHECK(small.center(2) == 2.0);

  CHECK_THROWS_AS(make_grid(-3, 3, 200), ConfigError);
  CHECK_THROWS_AS(make_grid(-3, 3, 1), ConfigError);
  CHECK_THROWS_AS(make_grid(3, -3, 11), ConfigError);
}

TEST_CASE("bin membership: half-open bins, closed last bin") {
  auto g = make_grid(0, 3, 3);
  CHECK(g.bin_of(0.0) == 0u);
  CHECK(g.bin_of(1.0) == 1u);
  CHECK(g.bin_of(2.0) == 2u);
  CHECK(g.bin_of(3.0) == 2u);
  CHECK_FALSE(g.bin_of(-1e-300).has_value());
  CHECK_FALSE(g.bin_of(3.0000001).has_value());
  CHECK_FALSE(g.bin_of(std::nan("")).has_value());
}

TEST_CASE("delta histogram") {
  auto g = make_grid(-3, 3, 201);
  std::vector<double> coords(50, 0.01);
  auto dg = build_histogram(coords, g, 1.0);
  for (std::size_t k = 0; k < g.n_bins(); ++k) {
    CHECK(dg.values()[k] == (k == 100 ? doctest::Approx(1.0 / g.bin_width()) : doctest::Approx(0.0)));
  }
  CHECK(eval_density(dg, 0.0) == doctest::Approx(1.0 / g.bin_width()));
  CHECK(eval_density(dg, 4.0) == 0.0);
  CHECK(eval_density(build_histogram(std::vector<double>{5.0}, g, 1.0), 0.0) == 0.0);

  auto heavy = build_histogram(coords, g, 12.0);
  CHECK(heavy.values()[100] == doctest::Approx(12.0 * dg.values()[100]));
  CHECK_THROWS_AS(build_histogram(std::vector<double>{}, g, 1.0), ConfigError);
}

TEST_CASE("uniform histogram matches the binomial law per bin") {
  auto g = make_grid(-3, 3, 201);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  const std::size_t n = 100000;
  std::vector<double> coords(n);
  for (auto& x : coords) x = u(rng);
  auto dg = build_histogram(coords, g, 1.0);
  double p = 1.0 / 201;
  double sd_count = std::sqrt(n * p * (1 - p));
  for (double v : dg.values()) {
    double count = v * n * g.bin_width();
    CHECK(std::abs(count - n * p) < 5.0 * sd_count);
  }
}

TEST_CASE("mass identity and nonnegativity") {
  oracle::Gen gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    double lo = gen.uniform(-5, 0), hi = lo + gen.uniform(0.5, 8);
    int bins = 2 * static_cast<int>(gen.index(1, 150)) + 1;
    auto g = make_grid(lo, hi, bins);
    std::size_t n = gen.index(1, 2000);
    auto coords = gen.uniform_vec(n, lo - 2, hi + 2);
    double rho = gen.uniform(0.1, 20);
    auto dg = build_histogram(coords, g, rho);
    std::size_t inside = 0;
    for (double x : coords) inside += (x >= lo && x <= hi);
    for (double v : dg.values()) CHECK(v >= 0.0);
    CHECK(dg.integral() == doctest::Approx(rho * inside / static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("marginal histogram reads one coordinate") {
  Ensemble e(3, 2, 1.0, {0.0, 1.0, 0.0, 1.0, 0.0, -1.0});
  auto g = make_grid(-3, 3, 3);
  auto m0 = build_marginal_histogram(e, 0, g);
  auto m1 = build_marginal_histogram(e, 1, g);
  CHECK(m0.values()[1] == doctest::Approx(1.0 / 2.0));
  CHECK(m1.values()[1] == doctest::Approx(1.0 / 6.0));
  CHECK(m1.values()[2] == doctest::Approx(2.0 / 6.0));
  CHECK_THROWS_AS(build_marginal_histogram(e, 2, g), ConfigError);
}

TEST_CASE("L1 error against a smooth density is U-shaped in the bin count") {
  // Standard normal truncated to [-4, 4]: bias dominates for few bins,
  // variance for many.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0, 1);
  const std::size_t n = 100000;
  std::vector<double> coords(n);
  for (auto& x : coords) x = z(rng);
  auto l1 = [&](int bins) {
    auto g = make_grid(-4, 4, bins);
    auto dg = build_histogram(coords, g, 1.0);
    // L1 against the pointwise density, midpoint rule inside each bin.
    double err = 0.0;
    for (std::size_t k = 0; k < g.n_bins(); ++k) {
      for (int s = 0; s < 20; ++s) {
        double x = g.lo() + (k + (s + 0.5) / 20.0) * g.bin_width();
        double f = std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI);
        err += std::abs(dg.values()[k] - f) * g.bin_width() / 20.0;
      }
    }
    return err;
  };
  double coarse = l1(11), mid = l1(201), fine = l1(20001);
  CHECK(mid < coarse);
  CHECK(mid < fine);
}

TEST_CASE("density CSV") {
  auto g = make_grid(-1, 1, 3);
  std::ostringstream os;
  write_density_csv(os, build_histogram(std::vector<double>{0.0}, g, 1.0));
  std::string s = os.str();
  CHECK(s.rfind("bin_center,value\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
