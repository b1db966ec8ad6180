#include "doctest.h"

#include "gibbs/criteria.hpp"
#include "gibbs/errors.hpp"

#include <random>

using namespace gibbs;

namespace {

Verdict normal(const char* f, int n, Rational alpha = Rational(1, 2)) {
  return classify_normalizability(parse_polynomial(f, n), {1, n, alpha});
}
Verdict tame(const char* f, int n, Rational alpha = Rational(1, 2)) {
  return check_grand_canonical(parse_polynomial(f, n), {1, n, alpha});
}

}  // namespace

TEST_CASE("monomial along a ray") {
  CHECK(monomial_at({2, 1}, {Rational(2), Rational(-1)}) == Rational(-4));
  CHECK(monomial_at({0, 0}, {Rational(0), Rational(0)}) == Rational(1));
}

TEST_CASE("ray leading exponents") {
  SUBCASE("-x1^2 x2^2 along (x, 0) with C > m") {
    RayExpression e;
    e.F = parse_polynomial("-x1^2*x2^2", 2);
    e.penalties = unit_penalties(e.F, Rational(2));
    e.mass = 1;
    // 2(|x| + x^2) - x^2
    RayAnalysis ra = ray_leading(e, {{Rational(1), Rational(0)}, {1, 1}});
    CHECK(ra.decided);
    CHECK(ra.diverges);
    CHECK(ra.leading_exponent == Rational(2));
    CHECK(ra.leading_coefficient == doctest::Approx(1));
  }
  SUBCASE("x^3") {
    RayExpression e;
    e.F = parse_polynomial("x^3", 1);
    e.mass = Rational(51, 100);
    RayAnalysis ra = ray_leading(e, {{Rational(1)}, {1}});
    CHECK(ra.diverges);
    CHECK(ra.leading_exponent == Rational(3));
    RayAnalysis neg = ray_leading(e, {{Rational(-1)}, {1}});
    CHECK(neg.decided);
    CHECK_FALSE(neg.diverges);
  }
  SUBCASE("exact cancellation moves to the next exponent") {
    RayExpression e;
    e.F = parse_polynomial("x1^2 - x2^2 + x1", 2);
    RayAnalysis ra = ray_leading(e, {{Rational(1), Rational(1)}, {1, 1}});
    CHECK(ra.diverges);
    CHECK(ra.leading_exponent == Rational(1));
  }
  SUBCASE("irrational powers are tracked in floating point") {
    RayExpression e;
    e.F = parse_polynomial("-x^4", 1);
    e.penalties = penalties_for(e.F, constant_q(e.F, Rational(3, 2)), Rational(1));
    // |x^3|^{3/2} = x^{9/2} beats -x^4
    RayAnalysis ra = ray_leading(e, {{Rational(1)}, {1}});
    CHECK(ra.diverges);
    CHECK(ra.leading_exponent == Rational(9, 2));
  }
}

TEST_CASE("boundedness certificates") {
  Polynomial F = parse_polynomial("-x^4", 1);
  BoundMode m;
  m.mass = Rational(1, 4);
  BoundResult ok = check_bounded(F, constant_q(F, Rational(11, 10)), m);
  CHECK(ok.status == BoundStatus::BoundedCertified);
  CHECK_FALSE(ok.certificate.empty());
  BoundResult bad = check_bounded(F, constant_q(F, Rational(3, 2)), m);
  CHECK(bad.status == BoundStatus::UnboundedWitness);
  REQUIRE(bad.witness);

  BoundMode power;
  power.power = true;
  power.kappa = Rational(7, 2);
  CHECK(check_bounded(parse_polynomial("x^3", 1), constant_q(parse_polynomial("x^3", 1), Rational(1)), power).status ==
        BoundStatus::BoundedCertified);
}

TEST_CASE("one-variable corpus at alpha = d/2") {
  for (int k = 3; k <= 6; ++k) {
    const std::string plus = "x^" + std::to_string(k), minus = "-x^" + std::to_string(k);
    CAPTURE(k);
    const bool even = k % 2 == 0;
    CHECK(normal(plus.c_str(), 1).status == Status::NonNormalizable);
    CHECK(normal(minus.c_str(), 1).status == (even ? Status::Normalizable : Status::NonNormalizable));
    // taming rescues exactly k = 3, and the already normalizable cases
    CHECK(tame(plus.c_str(), 1).status == (k == 3 ? Status::Normalizable : Status::NonNormalizable));
    CHECK(tame(minus.c_str(), 1).status == (k == 3 || even ? Status::Normalizable : Status::NonNormalizable));
  }
}

TEST_CASE("quadratic edge cases") {
  CHECK(normal("1/4x^2", 1).status == Status::Normalizable);
  CHECK(normal("3/4x^2", 1).status == Status::NonNormalizable);
  CHECK(normal("1/2x^2", 1).status == Status::Unknown);  // left open
}

TEST_CASE("two-variable monomials") {
  struct Case {
    const char* f;
    bool tamed;
  };
  const Case cases[] = {{"x*y^2", true},     {"-x*y^2", true},    {"x^2*y", true},   {"x^2*y^2", false},
                        {"-x^2*y^2", true},  {"x^3*y", false},    {"-x^3*y", false}, {"-x^2*y^4", false},
                        {"x*y^3", false},    {"-x^4*y^4", false}, {"x*y*x", true}};
  for (const auto& c : cases) {
    CAPTURE(c.f);
    CHECK(normal(c.f, 2).status == Status::NonNormalizable);
    CHECK(tame(c.f, 2).status == (c.tamed ? Status::Normalizable : Status::NonNormalizable));
  }
  CHECK(normal("x*y*z", 3).status == Status::NonNormalizable);
  CHECK(tame("x*y*z", 3).status == Status::Normalizable);
}

TEST_CASE("homogeneous polynomials") {
  CHECK(normal("-x^4 - y^4 - x^2*y^2", 2).status == Status::Normalizable);
  CHECK(normal("x^3 + y^3", 2).status == Status::NonNormalizable);
}

TEST_CASE("critical example") {
  Verdict v = tame("x*y^3 - 100*x^6", 2, Rational(4, 9));
  CHECK(v.status == Status::CriticalTag);
  CHECK(v.theorem == "taming_endpoint");
}

TEST_CASE("verdict halves never both certify") {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> e(0, 3), c(-3, 3);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial F(2);
    for (int t = 0; t < 3; ++t) {
      MultiIndex b{e(gen), e(gen)};
      if (degree(b) >= 1) F.add_term(b, Rational(c(gen)));
    }
    if (F.degree() < 3) continue;
    ModelParams p{1, 2, Rational(1, 2)};
    CHECK_NOTHROW(classify_normalizability(F, p));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("constant q = 1 always meets the growth margin") {
  // With q = 1, eta = beta is always available in the inner max, so the
  // margin is at least d, strictly above it when alpha < d/2.
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> e(0, 4), rr(0, 3), sg(0, 1);
  for (int trial = 0; trial < 60; ++trial) {
    Polynomial F(2);
    for (int t = 0; t < 2; ++t) {
      MultiIndex b{e(gen), e(gen)};
      if (degree(b) > 0) F.add_term(b, Rational(-1));
    }
    if (F.degree() < 3) continue;
    const int k = F.degree();
    // alpha strictly inside the regime: midpoint of ((k-1)/(2k), 1/2]
    const Rational alpha = trial % 2 ? Rational(1, 2) : (Rational(k - 1, 2 * k) + Rational(1, 2)) / 2;
    ModelParams p{1, 2, alpha};
    Ray ray{{Rational(sg(gen) ? 1 : -1), Rational(1)}, {rr(gen), rr(gen)}};
    auto m = ray_growth_margin(F, p, constant_q(F, Rational(1)), ray, 1);
    if (!m) continue;
    if (p.critical())
      CHECK(*m >= Rational(1));
    else
      CHECK(*m > Rational(1));
  }
}

TEST_CASE("regime violations are config errors") {
  CHECK_THROWS_AS(classify_normalizability(parse_polynomial("-x^4", 1), {1, 1, Rational(1, 4)}), ConfigError);
}
