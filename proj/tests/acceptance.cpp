// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "gibbs/criteria.hpp"
#include "gibbs/drift.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/wick.hpp"

#include <boost/math/statistics/linear_regression.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>

using namespace gibbs;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int g_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- 1. Hermite recurrence and addition identity ----

Outcome hermite_suite() {
  Outcome out;
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> ux(-3, 3), us(0.05, 2);
  double worst = 0;
  // k! [t^k] exp(tx) exp(-s t^2/2), expanded as a product of the two series
  for (int trial = 0; trial < 200; ++trial) {
    const double x = ux(gen), s = us(gen);
    double table[13];
    hermite_table(12, x, s, table);
    for (int k = 0; k <= 12; ++k) {
      double coef = 0, kfact = std::tgamma(k + 1.0);
      for (int j = 0; 2 * j <= k; ++j)
        coef += std::pow(x, k - 2 * j) / std::tgamma(k - 2 * j + 1.0) * std::pow(-s / 2, j) / std::tgamma(j + 1.0);
      const double want = kfact * coef;
      worst = std::max(worst, std::abs(table[k] - want) / std::max(1.0, std::abs(want)));
    }
  }
  // truncated generating sum, K = 12, |t| <= 1/2, |x| <= 1/2
  double worst_sum = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_real_distribution<double> half(-0.5, 0.5);
    const double x = half(gen), s = 0.5 + half(gen), t = half(gen);
    double table[13], sum = 0;
    hermite_table(12, x, s, table);
    for (int k = 0; k <= 12; ++k) sum += table[k] * std::pow(t, k) / std::tgamma(k + 1.0);
    const double want = std::exp(t * x - s * t * t / 2);
    worst_sum = std::max(worst_sum, std::abs(sum - want) / want);
  }
  double worst_add = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> e(0, 6);
    const MultiIndex a{e(gen), e(gen)};
    const std::vector<double> x{ux(gen), ux(gen)}, y{ux(gen), ux(gen)};
    const double c = us(gen);
    const double lhs = hermite_multi(a, {x[0] + y[0], x[1] + y[1]}, c);
    const double rhs = hermite_addition(a, x, y, c);
    worst_add = std::max(worst_add, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  out.ok = worst < 1e-9 && worst_sum < 1e-9 && worst_add < 1e-9;
  out.detail = "series " + fmt("%.2e", worst) + ", sum " + fmt("%.2e", worst_sum) + ", addition " +
               fmt("%.2e", worst_add) + " (< 1e-9)";
  return out;
}

// ---- 2. Gaussian orthogonality ----

Outcome orthogonality() {
  Outcome out;
  const int R = 1000000;
  double worst_z = 0;
  for (double rho : {0.0, 0.3, 0.9}) {
    std::vector<double> s(25, 0), s2(25, 0);
    const double c = std::sqrt(1 - rho * rho);
    for (int i = 0; i < R; ++i) {
      auto [g1, g2] = gaussian_pair(mix_key({2024, static_cast<std::uint64_t>(rho * 10), static_cast<std::uint64_t>(i)}));
      const double x1 = g1, x2 = rho * g1 + c * g2;
      double h1[5], h2[5];
      hermite_table(4, x1, 1, h1);
      hermite_table(4, x2, 1, h2);
      for (int k = 0; k <= 4; ++k)
        for (int m = 0; m <= 4; ++m) {
          const double v = h1[k] * h2[m];
          s[k * 5 + m] += v;
          s2[k * 5 + m] += v * v;
        }
    }
    for (int k = 0; k <= 4; ++k)
      for (int m = 0; m <= 4; ++m) {
        const double mean = s[k * 5 + m] / R;
        const double se = std::sqrt(std::max(0.0, s2[k * 5 + m] / R - mean * mean) / R);
        const double want = k == m ? std::tgamma(k + 1.0) * std::pow(rho, k) : 0.0;
        const double diff = std::abs(mean - want);
        if (diff > 1e-12) {
          const double z = se > 0 ? diff / se : INFINITY;
          worst_z = std::max(worst_z, z);
        }
      }
  }
  out.ok = worst_z < 5;
  out.detail = "max |z| = " + fmt("%.2f", worst_z) + " over 75 (k, m, rho) cells (< 5)";
  return out;
}

// ---- 3. sigma growth ----

Outcome sigma_growth() {
  Outcome out;
  std::vector<double> Ns, s03, s05, logN;
  for (int e = 10; e <= 20; ++e) {
    const int N = 1 << e;
    Ns.push_back(N);
    logN.push_back(std::log(static_cast<double>(N)));
    s03.push_back(sigma_alpha_N(1, 0.3, N));
    s05.push_back(sigma_alpha_N(1, 0.5, N));
  }
  const LogLogFit power = loglog_fit(Ns, s03);
  const double r2 = std::get<2>(boost::math::statistics::simple_ordinary_least_squares_with_R_squared(logN, s05));
  const double target = 1 - 2 * 0.3;
  out.ok = std::abs(power.slope - target) <= 0.1 * target && r2 > 0.99;
  out.detail = "alpha=0.3 slope " + fmt("%.4f", power.slope) + " vs 0.4; alpha=0.5 sigma~log N R^2 " + fmt("%.6f", r2);
  return out;
}

// ---- 4. variance oracle ----

Outcome variance_oracle() {
  Outcome out;
  const int R = 100000;
  struct Case {
    int n;
    MultiIndex gamma;
    int N;
  };
  const Case cases[] = {{1, {1}, 8}, {1, {2}, 8}, {1, {3}, 8}, {2, {1, 1}, 6}, {2, {2, 1}, 4}, {2, {1, 2}, 8}};
  double worst_z = 0;
  for (const auto& c : cases) {
    const ModelParams p{1, c.n, Rational(1, 2)};
    Polynomial F(c.n);
    F.add_term(c.gamma, 1);
    std::vector<double> v(R);
    parallel_for(R, g_threads(), [&](int r) { v[r] = wick_interaction(F, p, sample_field(p, c.N, 404, r)).value; });
    double m = 0;
    for (double x : v) m += x;
    m /= R;
    double m2 = 0, m4 = 0;
    for (double x : v) {
      const double d2 = (x - m) * (x - m);
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= R;
    m4 /= R;
    const double se = std::sqrt((m4 - m2 * m2) / R);
    worst_z = std::max(worst_z, std::abs(m2 - wick_variance_oracle(p, c.gamma, c.N)) / se);
  }
  out.ok = worst_z < 5;
  out.detail = "max |z| = " + fmt("%.2f", worst_z) + " over 6 (n, gamma, N) cases, 1e5 samples (< 5)";
  return out;
}

// ---- 5. corpus verdicts ----

Outcome corpus() {
  Outcome out;
  int checked = 0, wrong = 0, unknown = 0;
  auto expect = [&](const std::string& f, int n, Rational alpha, bool tamed, Status want) {
    const Polynomial F = parse_polynomial(f, n);
    const ModelParams p{1, n, alpha};
    const Verdict v = tamed ? check_grand_canonical(F, p) : classify_normalizability(F, p);
    ++checked;
    if (v.status == Status::Unknown) ++unknown;
    if (v.status != want) {
      ++wrong;
      out.detail += " [" + f + (tamed ? " tamed" : "") + "]";
    }
  };
  const Rational half(1, 2);
  for (int k = 3; k <= 6; ++k) {
    const bool even = k % 2 == 0;
    const std::string plus = "x^" + std::to_string(k), minus = "-" + plus;
    expect(plus, 1, half, false, Status::NonNormalizable);
    expect(minus, 1, half, false, even ? Status::Normalizable : Status::NonNormalizable);
    expect(plus, 1, half, true, k == 3 ? Status::Normalizable : Status::NonNormalizable);
    expect(minus, 1, half, true, k == 3 || even ? Status::Normalizable : Status::NonNormalizable);
  }
  for (int b1 = 1; b1 <= 4; ++b1)
    for (int b2 = 1; b2 <= 4; ++b2)
      for (int sign : {1, -1}) {
        if (b1 + b2 < 3) continue;
        const std::string f =
            std::string(sign < 0 ? "-" : "") + "x^" + std::to_string(b1) + "*y^" + std::to_string(b2);
        const bool tamed = b1 + b2 == 3 || (sign < 0 && b1 == 2 && b2 == 2);
        expect(f, 2, half, false, Status::NonNormalizable);
        expect(f, 2, half, true, tamed ? Status::Normalizable : Status::NonNormalizable);
      }
  expect("-x^4 - y^4 - x^2*y^2", 2, half, false, Status::Normalizable);
  expect("x^3 + y^3", 2, half, false, Status::NonNormalizable);
  expect("x*y^3 - 100*x^6", 2, Rational(4, 9), true, Status::CriticalTag);
  // the one entry left open
  const Verdict open = classify_normalizability(parse_polynomial("1/2x^2", 1), {1, 1, half});
  out.ok = wrong == 0 && unknown == 0 && open.status == Status::Unknown;
  out.detail = std::to_string(checked) + " entries, " + std::to_string(wrong) + " wrong, " + std::to_string(unknown) +
               " unknown; open quadratic " + to_string(open.status) + out.detail;
  return out;
}

// ---- 6. witness trends ----

Outcome witness_trends() {
  Outcome out;
  const std::vector<int> Ms{4, 8, 16, 32};
  EstimatorConfig cfg;
  cfg.samples = 10000;
  cfg.L = 1e15;
  cfg.seed = 7;
  cfg.threads = g_threads();
  bool all = true;
  for (int family = 0; family < 3; ++family) {
    ModelParams p;
    Polynomial F(1);
    std::string name;
    EstimatorConfig c = cfg;
    if (family == 0) {
      p = {1, 2, Rational(1, 2)};
      F = parse_polynomial("-x1^2*x2^2", 2);
      name = "-x1^2x2^2";
    } else if (family == 1) {
      p = {1, 1, Rational(1, 2)};
      F = parse_polynomial("x^5", 1);
      c.taming = Taming{};
      name = "x^5 bump";
    } else {
      p = {1, 2, Rational(4, 9)};
      F = parse_polynomial("10*x1*x2^3 - 1000*x1^6", 2);
      c.taming = Taming{};
      name = "critical";
    }
    std::vector<ObjectiveEstimate> rows;
    for (int M : Ms) {
      DriftWitnessSpec w;
      if (family == 0)
        w = build_const_witness(F, p, default_witness_ray(F, p, DriftFamily::ConstShift, {}), {}, M, Rational(1));
      else if (family == 1)
        w = build_bump_witness(F, p, default_witness_ray(F, p, DriftFamily::Bump, {}), Rational(1), M);
      else
        w = build_critical_witness(F, p, M);
      rows.push_back(bd_objective(F, p, w.drift, std::max(2 * M, w.support), c));
    }
    double worst = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double se = std::hypot(rows[i].se, rows[i - 1].se);
      worst = std::min(worst, (rows[i - 1].mean - rows[i].mean) / se);
    }
    all = all && worst > 2;
    out.detail += (out.detail.empty() ? "" : "; ") + name + " min gap " + fmt("%.1f", worst) + " SE";
  }
  out.ok = all;
  out.detail += " (> 2)";
  return out;
}

// ---- 7. bump moments ----

Outcome bump_moments() {
  Outcome out;
  std::vector<int> Ms;
  for (int e = 5; e <= 10; ++e) Ms.push_back(1 << e);
  struct Setting {
    double s, r;
    int d;
  };
  bool all = true;
  for (const Setting& st : {Setting{2, 3, 1}, Setting{1.5, 4, 1}, Setting{3, 2, 1}}) {
    const MomentRow row = moment_scan({}, st.d, st.r, st.s, Ms);
    const bool ok = std::abs(row.fit.slope - row.expected) <= 0.1 * row.expected;
    all = all && ok;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("(s,r,d)=(") + fmt("%g", st.s) + "," +
                  fmt("%g", st.r) + "," + std::to_string(st.d) + ") slope " + fmt("%.4f", row.fit.slope) + " vs " +
                  fmt("%g", row.expected);
  }
  out.ok = all;
  return out;
}

// ---- 8. regularity dichotomy ----

Outcome regularity() {
  Outcome out;
  const std::vector<int> Ns{32, 64, 128, 256};
  auto medians = [&](const Rational& alpha) {
    std::vector<double> m;
    for (const auto& pt : regularity_scan({1, 1, alpha}, {3}, Ns, 0.05, 64, 88)) m.push_back(pt.median);
    return m;
  };
  const auto hi = medians(Rational(9, 20));
  const auto lo = medians(Rational(1, 4));
  const double spread = *std::max_element(hi.begin(), hi.end()) / *std::min_element(hi.begin(), hi.end());
  bool monotone = true;
  for (std::size_t i = 1; i < lo.size(); ++i) monotone = monotone && lo[i] > lo[i - 1];
  const double growth = lo.back() / lo.front();
  out.ok = spread < 2 && monotone && growth > 2;
  out.detail = "alpha=0.45 spread x" + fmt("%.2f", spread) + " (< 2); alpha=0.25 growth x" + fmt("%.2f", growth) +
               (monotone ? " monotone" : " not monotone") + " (> 2)";
  return out;
}

// ---- 9. grid invariance ----

Outcome grid_invariance() {
  Outcome out;
  std::mt19937_64 gen(909);
  std::uniform_int_distribution<int> e(0, 3), c(-3, 3);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2, n = 1 + (trial / 2) % 2;
    Polynomial F(n);
    while (F.degree() < 3) {
      MultiIndex b(n);
      for (int& x : b) x = e(gen);
      if (degree(b) > 0 && degree(b) <= 4) F.add_term(b, Rational(c(gen)));
    }
    const int k = F.degree();
    const ModelParams p{d, n, Rational(d, 2)};
    const int N = d == 1 ? 12 : 5;
    const SpectralField f = sample_field(p, N, 31, trial);
    const WickReport base = wick_interaction(F, p, f);
    for (int G : {2 * k * N + 1, 2 * k * N + 2, 3 * k * N + 7}) {
      const double v = wick_interaction(F, p, f, G).value;
      worst = std::max(worst, std::abs(v - base.value) / std::max(1.0, std::abs(base.value)));
    }
  }
  out.ok = worst < 1e-9;
  out.detail = "max relative change " + fmt("%.2e", worst) + " over 20 fields (< 1e-9)";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // seconds
    Outcome (*run)();
  };
  const Criterion all[] = {
      {"hermite recurrence, generating function, addition", 1, hermite_suite},
      {"gaussian orthogonality of hermite pairs", 30, orthogonality},
      {"sigma growth exponents", 5, sigma_growth},
      {"wick variance oracle", 120, variance_oracle},
      {"corpus verdicts", 60, corpus},
      {"witness divergence trends", 600, witness_trends},
      {"bump moment scaling", 60, bump_moments},
      {"regularity dichotomy", 300, regularity},
      {"exact quadrature grid invariance", 10, grid_invariance},
  };
  int failures = 0, index = 0;
  for (const auto& c : all) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget;
    const bool ok = o.ok && in_time;
    if (!ok) ++failures;
    std::printf("%s %d %s: %s; %.2f s of %.0f s%s\n", ok ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), dt,
                c.budget, in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
