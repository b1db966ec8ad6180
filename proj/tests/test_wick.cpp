#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <cmath>
#include <random>

using namespace gibbs;

TEST_CASE("hermite polynomials of low order") {
  const double x = 1.3, s = 0.7;
  CHECK(hermite(0, x, s) == 1);
  CHECK(hermite(1, x, s) == x);
  CHECK(hermite(2, x, s) == doctest::Approx(x * x - s));
  CHECK(hermite(3, x, s) == doctest::Approx(x * x * x - 3 * s * x));
  CHECK(hermite(4, x, s) == doctest::Approx(std::pow(x, 4) - 6 * s * x * x + 3 * s * s));
  double t[6];
  hermite_table(5, x, s, t);
  for (int k = 0; k <= 5; ++k) CHECK(t[k] == doctest::Approx(hermite(k, x, s)));
  CHECK(hermite_multi({2, 1}, {x, 0.4}, s) == doctest::Approx((x * x - s) * 0.4));
}

TEST_CASE("hermite generating function") {
  // sum_k H_k(x; s) t^k / k! = exp(t x - s t^2 / 2)
  for (double x : {-2.0, 0.0, 0.8}) {
    const double s = 1.1, t = 0.3;
    double sum = 0, fact = 1;
    for (int k = 0; k <= 30; ++k) {
      if (k > 0) fact *= k;
      sum += hermite(k, x, s) * std::pow(t, k) / fact;
    }
    CHECK(sum == doctest::Approx(std::exp(t * x - s * t * t / 2)).epsilon(1e-12));
  }
}

TEST_CASE("hermite addition formula") {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x{u(gen), u(gen)}, y{u(gen), u(gen)};
    const MultiIndex a{i % 5, (i / 5) % 4};
    const double c = 0.5 + std::abs(u(gen));
    const double lhs = hermite_multi(a, {x[0] + y[0], x[1] + y[1]}, c);
    CHECK(hermite_addition(a, x, y, c) == doctest::Approx(lhs).epsilon(1e-10));
  }
}

TEST_CASE("renormalisation constant") {
  CHECK(sigma_alpha_N(1, 1.0, 1) == doctest::Approx(2.0));
  double brute = 0;
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b)
      if (a * a + b * b <= 36) brute += std::pow(1.0 + a * a + b * b, -0.8);
  CHECK(sigma_alpha_N(2, 0.8, 6) == doctest::Approx(brute).epsilon(1e-13));
}

TEST_CASE("wick interaction of deterministic fields") {
  ModelParams p{1, 1, Rational(1, 2)};
  const double sigma = sigma_alpha_N(1, 0.5, 8);
  SpectralField zero = SpectralField::zeros(1, 1, 8);
  CHECK(wick_interaction(parse_polynomial("x^2", 1), p, zero).value == doctest::Approx(-sigma));
  CHECK(wick_interaction(parse_polynomial("5/2", 1), p, zero).value == doctest::Approx(2.5));
  SpectralField c = zero;
  c.coef[0][8] = 1.5;  // constant 1.5
  CHECK(wick_interaction(parse_polynomial("x^2", 1), p, c).value == doctest::Approx(2.25 - sigma));
  CHECK(wick_interaction(parse_polynomial("x^3", 1), p, c).value ==
        doctest::Approx(std::pow(1.5, 3) - 3 * sigma * 1.5));
  CHECK(wick_l2(c, sigma) == doctest::Approx(2.25 - sigma));
}

TEST_CASE("wick interaction is grid independent past 2kN+1") {
  ModelParams p{2, 2, Rational(1)};
  Polynomial F = parse_polynomial("x1*x2^3 - x1^4 + 2*x2", 2);
  SpectralField f = sample_field(p, 5, 4, 0);
  const WickReport base = wick_interaction(F, p, f);
  CHECK(base.grid >= 2 * 4 * 5 + 1);
  for (int G : {45, 64, 81}) {
    const double v = wick_interaction(F, p, f, G).value;
    CHECK(std::abs(v - base.value) <= 1e-9 * std::max(1.0, std::abs(base.value)));
  }
  CHECK_THROWS_AS(wick_interaction(F, p, f, 30), ConfigError);
}

TEST_CASE("wick l2 matches the quadratic interaction") {
  ModelParams p{1, 2, Rational(1, 2)};
  SpectralField f = sample_field(p, 6, 11, 0);
  const WickReport r = wick_interaction(parse_polynomial("x1^2 + x2^2", 2), p, f);
  CHECK(r.wick_l2 == doctest::Approx(r.value));
}

TEST_CASE("wick powers average to zero") {
  ModelParams p{1, 1, Rational(1, 2)};
  Polynomial F = parse_polynomial("x^3 - x^4", 1);
  const int R = 3000;
  double s = 0, s2 = 0;
  for (int r = 0; r < R; ++r) {
    const double v = wick_interaction(F, p, sample_field(p, 8, 21, r)).value;
    s += v;
    s2 += v * v;
  }
  const double mean = s / R, se = std::sqrt((s2 / R - mean * mean) / R);
  CHECK(std::abs(mean) < 5 * se);
}

TEST_CASE("regularity proxy is deterministic per seed") {
  ModelParams p{1, 1, Rational(1, 2)};
  auto a = regularity_scan(p, {3}, {16, 32}, 0.05, 4, 3);
  auto b = regularity_scan(p, {3}, {16, 32}, 0.05, 4, 3);
  REQUIRE(a.size() == 2);
  CHECK(a[0].values == b[0].values);
  CHECK(a[1].median > 0);
}
