#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/estimator.hpp"
#include "gibbs/wick.hpp"

#include <cmath>

using namespace gibbs;

namespace {

EstimatorConfig small(int samples = 400) {
  EstimatorConfig cfg;
  cfg.samples = samples;
  cfg.seed = 13;
  cfg.cutoffs = {8};
  return cfg;
}

ShiftDrift zero_drift(const ModelParams& p) {
  ShiftDrift d;
  d.shift = SpectralField::zeros(p.d, p.n, 0);
  return d;
}

}  // namespace

TEST_CASE("batch means") {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  MeanSe m = batch_means(x, 4);
  CHECK(m.mean == doctest::Approx(4.5));
  // batch means 1.5 3.5 5.5 7.5: sample variance 20/3, se = sqrt(20/3/4)
  CHECK(m.se == doctest::Approx(std::sqrt(20.0 / 12)));
  CHECK(batch_means({2, 2, 2}, 32).se == 0);
}

TEST_CASE("trivial interactions") {
  ModelParams p{1, 1, Rational(1, 2)};
  auto zero = estimate_log_z(Polynomial(1), p, small());
  CHECK(zero[0].mean == 1.0);
  CHECK(zero[0].se == 0.0);
  auto c = estimate_log_z(parse_polynomial("3/2", 1), p, small());
  CHECK(c[0].mean == doctest::Approx(std::exp(1.5)).epsilon(1e-14));
}

TEST_CASE("config validation") {
  ModelParams p{1, 1, Rational(1, 2)};
  EstimatorConfig cfg = small(1);
  CHECK_THROWS_AS(estimate_log_z(Polynomial(1), p, cfg), ConfigError);
  cfg = small();
  cfg.L = INFINITY;
  CHECK_THROWS_AS(estimate_log_z(Polynomial(1), p, cfg), ConfigError);
  cfg = small();
  cfg.cutoffs.clear();
  CHECK_THROWS_AS(estimate_log_z(Polynomial(1), p, cfg), ConfigError);
}

TEST_CASE("focusing versus defocusing trends") {
  ModelParams p{1, 1, Rational(1, 2)};
  EstimatorConfig cfg = small(2000);
  cfg.cutoffs = {8, 16, 32, 64};
  cfg.L = 20;
  auto def = estimate_log_z(parse_polynomial("-x^4", 1), p, cfg);
  auto foc = estimate_log_z(parse_polynomial("x^4", 1), p, cfg);
  for (std::size_t i = 1; i < def.size(); ++i) {
    // no monotone blow-up beyond 3 SE
    const double se = std::hypot(def[i].se, def[i - 1].se);
    CHECK(def[i].mean < def[i - 1].mean + 3 * se + 1e-12);
    CHECK(foc[i].mean > foc[i - 1].mean);
  }
  CHECK(foc.back().truncation_hits > foc.front().truncation_hits);
  CHECK(foc.back().mean >= std::exp(cfg.L) * foc.back().truncation_hits / cfg.samples);
}

TEST_CASE("raising L never lowers the truncated mean") {
  ModelParams p{1, 1, Rational(1, 2)};
  Polynomial F = parse_polynomial("x^3", 1);
  double prev = 0;
  for (double L : {0.0, 1.0, 3.0, 10.0}) {
    EstimatorConfig cfg = small();
    cfg.L = L;
    const double m = estimate_log_z(F, p, cfg)[0].mean;
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("taming never raises the integrand") {
  ModelParams p{1, 1, Rational(1, 2)};
  Polynomial F = parse_polynomial("x^3", 1);
  EstimatorConfig cfg = small();
  const double plain = estimate_log_z(F, p, cfg)[0].mean;
  for (double K : {0.1, 1.0, 5.0}) {
    cfg.taming = Taming{K, 1.5};
    CHECK(estimate_log_z(F, p, cfg)[0].mean <= plain);
  }
}

TEST_CASE("variance oracle by hand") {
  ModelParams p{1, 1, Rational(1)};
  CHECK(wick_variance_oracle(p, {1}, 5) == doctest::Approx(1));
  // pairs (l, -l), l in {-1, 0, 1}: 2! (1 + 2/4)
  CHECK(wick_variance_oracle(p, {2}, 1) == doctest::Approx(3));
  ModelParams p2{1, 2, Rational(1)};
  // sum_l (1+l^2)^-2 over |l| <= 1
  CHECK(wick_variance_oracle(p2, {1, 1}, 1) == doctest::Approx(1.5));
  CHECK_THROWS_AS(wick_variance_oracle({1, 1, Rational(1)}, {4}, 400), ConfigError);
}

TEST_CASE("variance oracle against Monte Carlo") {
  ModelParams p{1, 2, Rational(1, 2)};
  const MultiIndex gamma{2, 1};
  Polynomial F(2);
  F.add_term(gamma, 1);
  const int R = 20000, N = 4;
  std::vector<double> v(R);
  for (int r = 0; r < R; ++r) v[r] = wick_interaction(F, p, sample_field(p, N, 77, r)).value;
  double m = 0, m2 = 0, m4 = 0;
  for (double x : v) m += x;
  m /= R;
  for (double x : v) {
    m2 += (x - m) * (x - m);
    m4 += std::pow(x - m, 4);
  }
  m2 /= R;
  m4 /= R;
  const double se = std::sqrt((m4 - m2 * m2) / R);
  CHECK(std::abs(m2 - wick_variance_oracle(p, gamma, N)) < 5 * se);
}

TEST_CASE("zero drift objective is minus the constant term") {
  ModelParams p{1, 2, Rational(1, 2)};
  Polynomial F = parse_polynomial("-x1^2*x2^2 + x1 + 7/4", 2);
  EstimatorConfig cfg = small(2000);
  ObjectiveEstimate o = bd_objective(F, p, zero_drift(p), 8, cfg);
  CHECK(std::abs(o.mean + 1.75) < 3 * o.se);
  CHECK(o.kinetic_mean == 0);
}

TEST_CASE("constant shift kinetic term") {
  ModelParams p{1, 2, Rational(1, 2)};
  ShiftDrift d = zero_drift(p);
  d.shift.coef[0][0] = 1.5;
  d.shift.coef[1][0] = -2;
  CHECK(kinetic_expected(d, 0.5, 8) == 0.5 * (2.25 + 4));
  CHECK(kinetic_pathwise(d, nullptr, 0.5, 8) == 0.5 * (2.25 + 4));
  ObjectiveEstimate o = bd_objective(Polynomial(2), p, d, 8, small());
  CHECK(o.kinetic_mean == 0.5 * (2.25 + 4));
  CHECK(o.mean == doctest::Approx(0.5 * (2.25 + 4)));
}

TEST_CASE("noise-cancelling kinetic term averages to its closed form") {
  ModelParams p{1, 1, Rational(1, 2)};
  ShiftDrift d = zero_drift(p);
  d.shift.coef[0][0] = 0.7;
  d.cancel_noise = true;
  d.M = 4;
  d.eta = 0.6;
  ObjectiveEstimate o = bd_objective(Polynomial(1), p, d, 8, small(4000));
  // 1/2 (0.49 + eta * 9 / (1 - eta))
  CHECK(o.kinetic_expected == doctest::Approx(0.5 * (0.49 + 0.6 * 9 / 0.4)));
  CHECK(o.se > 0);
  CHECK(std::abs(o.kinetic_mean - o.kinetic_expected) < 5 * o.se);
}

TEST_CASE("variational direction against the partition function") {
  ModelParams p{1, 1, Rational(1, 2)};
  Polynomial F = parse_polynomial("-x^4 + x", 1);
  EstimatorConfig cfg = small(4000);
  auto z = estimate_log_z(F, p, cfg);
  ObjectiveEstimate o = bd_objective(F, p, zero_drift(p), 8, cfg);
  CHECK(-std::log(z[0].mean) <= o.mean + 3 * o.se);
}

TEST_CASE("results do not depend on the thread count") {
  ModelParams p{1, 1, Rational(1, 2)};
  Polynomial F = parse_polynomial("x^3 - x^4", 1);
  EstimatorConfig a = small(), b = small();
  b.threads = 3;
  CHECK(estimate_log_z(F, p, a)[0].mean == estimate_log_z(F, p, b)[0].mean);
}
