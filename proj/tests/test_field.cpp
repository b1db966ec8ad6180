#include "doctest.h"

#include "gibbs/errors.hpp"
#include "gibbs/field.hpp"
#include "gibbs/rng.hpp"

#include <cmath>
#include <sstream>

using namespace gibbs;

TEST_CASE("philox4x32-10 known answers") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normals have unit variance") {
  double s1 = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    auto [a, b] = gaussian_pair(mix_key({1, static_cast<std::uint64_t>(i)}));
    s1 += a + b;
    s2 += a * a + b * b;
  }
  CHECK(std::abs(s1 / (2 * n)) < 5 / std::sqrt(2.0 * n));
  CHECK(std::abs(s2 / (2 * n) - 1) < 5 * std::sqrt(2.0 / (2 * n)));
}

TEST_CASE("mode sets") {
  CHECK(ModeSet(1, 5).size() == 11);
  CHECK(ModeSet(2, 1).size() == 5);
  CHECK(ModeSet(2, 2).size() == 13);
  const ModeSet ms(2, 3);
  for (int i = 0; i < ms.size(); ++i) {
    const int j = ms.negated(i);
    CHECK(ms.mode(j)[0] == -ms.mode(i)[0]);
    CHECK(ms.mode(j)[1] == -ms.mode(i)[1]);
    CHECK(ms.index_of(ms.mode(i)) == i);
    if (ms.norm2(i) != 0) CHECK(ms.is_positive(i) != ms.is_positive(j));
  }
  int far[2] = {3, 1};
  CHECK(ms.index_of(far) == -1);
}

TEST_CASE("sampled fields are real and nested across cutoffs") {
  ModelParams p{2, 2, Rational(1)};
  SpectralField a = sample_field(p, 4, 99, 3);
  SpectralField b = sample_field(p, 8, 99, 3);
  CHECK(a.hermitian_defect() == 0);
  const ModeSet& ms = *a.modes;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < ms.size(); ++i) CHECK(a.coef[c][i] == b.coef[c][b.modes->index_of(ms.mode(i))]);
  SpectralField other = sample_field(p, 4, 99, 4);
  CHECK(other.coef[0][1] != a.coef[0][1]);
}

TEST_CASE("mode variances match (1+|l|^2)^-alpha") {
  ModelParams p{1, 1, Rational(1, 2)};
  const int R = 4000;
  const int N = 3;
  std::vector<double> m2(2 * N + 1, 0.0), m4(2 * N + 1, 0.0);
  for (int r = 0; r < R; ++r) {
    SpectralField f = sample_field(p, N, 5, r);
    for (int i = 0; i < f.modes->size(); ++i) {
      const double v = std::norm(f.coef[0][i]);
      m2[i] += v;
      m4[i] += v * v;
    }
  }
  const ModeSet& ms = *ModeSet::get(1, N);
  for (int i = 0; i < ms.size(); ++i) {
    const double mean = m2[i] / R, var = m4[i] / R - mean * mean;
    CHECK(std::abs(mean - bracket(ms.norm2(i), -0.5)) < 5 * std::sqrt(var / R));
  }
}

TEST_CASE("coupled pair covariance") {
  ModelParams p{1, 1, Rational(1, 2)};
  const double eta = 0.7;
  const int R = 4000;
  double cyy = 0, cye = 0, cee = 0, c2 = 0;
  for (int r = 0; r < R; ++r) {
    CoupledSample s = sample_coupled(p, 6, 3, eta, 8, r);
    const int l1 = s.Y.modes->size() / 2 + 1;  // l = 1
    const int e1 = s.Y_eta.modes->size() / 2 + 1;
    REQUIRE(s.Y.modes->mode(l1)[0] == 1);
    REQUIRE(s.Y_eta.modes->mode(e1)[0] == 1);
    const double x = (s.Y.coef[0][l1] * std::conj(s.Y_eta.coef[0][e1])).real();
    cye += x;
    c2 += x * x;
    cyy += std::norm(s.Y.coef[0][l1]);
    cee += std::norm(s.Y_eta.coef[0][e1]);
  }
  const double w = bracket(1, -0.5);
  const double se = std::sqrt(c2 / R - (cye / R) * (cye / R)) / std::sqrt(R);
  CHECK(std::abs(cye / R - eta * w) < 5 * se);
  CHECK(cyy / R == doctest::Approx(w).epsilon(0.06));
  CHECK(cee / R == doctest::Approx(eta * w).epsilon(0.06));
  CHECK_THROWS_AS(sample_coupled(p, 6, 3, 1.0, 8, 0), ConfigError);
}

TEST_CASE("binary field dump round trip") {
  ModelParams p{2, 2, Rational(1)};
  SpectralField f = sample_field(p, 5, 42, 0);
  std::stringstream ss;
  write_field(ss, f, 42);
  CHECK(ss.str().size() == 32 + 16 * 2 * f.modes->size());
  std::uint64_t seed = 0;
  SpectralField g = read_field(ss, &seed);
  CHECK(seed == 42);
  CHECK(g.N() == 5);
  CHECK(g.coef == f.coef);
  std::stringstream bad("NOTAFIELD_______________________________________");
  CHECK_THROWS_AS(read_field(bad), ConfigError);
}

TEST_CASE("synthesis and analysis are inverse") {
  ModelParams p{2, 1, Rational(1)};
  SpectralField f = sample_field(p, 4, 1, 0);
  const int G = fft_size_at_least(9);
  CHECK(G == 9);
  auto v = synthesize(f, 0, G);
  auto c = analyze(v, 2, G);
  const ModeSet& ms = *f.modes;
  for (int i = 0; i < ms.size(); ++i) {
    const int* l = ms.mode(i);
    const std::size_t k = ((l[0] + G) % G) * G + (l[1] + G) % G;
    CHECK(std::abs(c[k] - f.coef[0][i]) < 1e-12);
  }
  CHECK_THROWS_AS(synthesize(f, 0, 8), ConfigError);
}

TEST_CASE("sobolev norms of a single cosine") {
  SpectralField f = SpectralField::zeros(1, 1, 2);
  const int i = f.modes->size() / 2;
  f.coef[0][i + 2] = 0.5;
  f.coef[0][i - 2] = 0.5;  // cos(4 pi x)
  CHECK(sobolev_norm(f, 0, 2) == doctest::Approx(std::sqrt(0.5)));
  CHECK(sobolev_norm(f, 1, 2) == doctest::Approx(std::sqrt(0.5 * 5)));
  CHECK(sobolev_norm(f, 0, INFINITY) == doctest::Approx(1));
  CHECK(sobolev_norm(f, -1, INFINITY) == doctest::Approx(std::pow(5.0, -0.5)));
}

TEST_CASE("fft sizes are 5-smooth") {
  CHECK(fft_size_at_least(7) == 8);
  CHECK(fft_size_at_least(31) == 32);
  CHECK(fft_size_at_least(97) == 100);
}
