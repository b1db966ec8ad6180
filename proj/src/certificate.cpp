#include "gibbs/criteria.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/lp.hpp"

#include <cmath>

namespace gibbs {

std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::BoundedCertified: return "BOUNDED_CERTIFIED";
    case BoundStatus::UnboundedWitness: return "UNBOUNDED_WITNESS";
    case BoundStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

struct Term {
  std::vector<Rational> exponent;
  Rational coef;  // positive magnitude
};

struct Sink {
  std::vector<Rational> exponent;
  std::optional<Rational> budget;  // empty = unlimited
};

// Largest weight the origin can take when writing v as a convex combination
// of the sinks and 0; nullopt when v lies outside that hull.
std::optional<Rational> origin_weight(const std::vector<Rational>& v, const std::vector<Sink>& sinks) {
  const std::size_t n = v.size(), K = sinks.size();
  std::vector<std::vector<Rational>> A(n + 1, std::vector<Rational>(K + 1, Rational(0)));
  std::vector<Rational> b(n + 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) A[i][k] = sinks[k].exponent[i];
    b[i] = v[i];
  }
  for (std::size_t k = 0; k <= K; ++k) A[n][k] = 1;
  b[n] = 1;
  std::vector<Rational> c(K + 1, Rational(0));
  c[K] = 1;
  LpResult res = solve_lp(A, b, c);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return res.value;
}

// Joint budget program for the sources that sit on the outer boundary of
// the sink hull. Returns the largest uniform reserve t left on every
// limited sink, or nullopt if the budgets cannot be met.
std::optional<Rational> budget_reserve(const std::vector<Term>& boundary, const std::vector<Sink>& sinks) {
  const std::size_t n = sinks.front().exponent.size(), K = sinks.size(), B = boundary.size();
  std::vector<std::size_t> limited;
  for (std::size_t k = 0; k < K; ++k)
    if (sinks[k].budget) limited.push_back(k);
  const std::size_t nlam = B * K;
  const std::size_t nvar = nlam + limited.size() + 2;  // lambdas, slacks, t, u
  const std::size_t t_col = nlam + limited.size();
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (std::size_t s = 0; s < B; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> row(nvar, Rational(0));
      for (std::size_t k = 0; k < K; ++k) row[s * K + k] = sinks[k].exponent[i];
      A.push_back(std::move(row));
      b.push_back(boundary[s].exponent[i]);
    }
    std::vector<Rational> row(nvar, Rational(0));
    for (std::size_t k = 0; k < K; ++k) row[s * K + k] = 1;
    A.push_back(std::move(row));
    b.push_back(1);
  }
  for (std::size_t li = 0; li < limited.size(); ++li) {
    const std::size_t k = limited[li];
    std::vector<Rational> row(nvar, Rational(0));
    for (std::size_t s = 0; s < B; ++s) row[s * K + k] = boundary[s].coef;
    row[nlam + li] = 1;
    row[t_col] = 1;
    A.push_back(std::move(row));
    b.push_back(*sinks[k].budget);
  }
  std::vector<Rational> row(nvar, Rational(0));
  row[t_col] = 1;
  row[t_col + 1] = 1;
  A.push_back(std::move(row));
  b.push_back(1);
  std::vector<Rational> c(nvar, Rational(0));
  c[t_col] = 1;
  LpResult res = solve_lp(A, b, c);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return res.value;
}

double evaluate_expression(const Polynomial& F, const QMap& q, const BoundMode& mode, const Rational& weight,
                           const std::vector<double>& x) {
  double v = F.evaluate(x);
  for (const auto& pen : penalties_for(F, q, weight)) {
    double m = 1;
    for (std::size_t i = 0; i < x.size(); ++i) m *= std::pow(std::abs(x[i]), pen.beta[i]);
    v += to_double(pen.weight) * std::pow(m, to_double(pen.q));
  }
  double r2 = 0;
  for (double xi : x) r2 += xi * xi;
  if (mode.power)
    v -= to_double(mode.C.value_or(Rational(1))) * std::pow(r2, to_double(mode.kappa) / 2);
  else
    v -= to_double(mode.mass) * r2;
  return v;
}

}  // namespace

BoundResult check_bounded(const Polynomial& F, const QMap& q, const BoundMode& mode, bool search_witness,
                          const Rational& weight) {
  const int n = F.nvars();
  std::vector<Term> sources;
  std::vector<Sink> sinks;
  for (const auto& [beta, c] : F.terms()) {
    if (degree(beta) == 0) continue;
    std::vector<Rational> e(beta.begin(), beta.end());
    if (c < 0 && is_even(beta))
      sinks.push_back({e, Rational(-c)});
    else
      sources.push_back({e, c < 0 ? Rational(-c) : c});
  }
  for (const auto& pen : penalties_for(F, q, weight)) {
    std::vector<Rational> e(n);
    for (int i = 0; i < n; ++i) e[i] = pen.q * pen.beta[i];
    sources.push_back({e, pen.weight});
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> e(n, Rational(0));
    if (mode.power) {
      e[i] = mode.kappa;
      std::optional<Rational> budget;
      if (mode.C) budget = *mode.C / n;
      sinks.push_back({e, budget});
    } else if (mode.mass > 0) {
      e[i] = 2;
      sinks.push_back({e, mode.mass});
    }
  }

  BoundResult out;
  bool certified = !sinks.empty() || sources.empty();
  std::vector<Term> boundary;
  std::size_t n_free = 0;
  for (const auto& src : sources) {
    if (!certified) break;
    auto w = origin_weight(src.exponent, sinks);
    if (!w)
      certified = false;
    else if (*w > 0)
      ++n_free;
    else
      boundary.push_back(src);
  }
  if (certified && !sinks.empty()) {
    bool any_limited = false;
    for (const auto& s : sinks) any_limited |= s.budget.has_value();
    if (any_limited && (!boundary.empty() || n_free > 0)) {
      auto t = boundary.empty() ? std::optional<Rational>(Rational(1)) : budget_reserve(boundary, sinks);
      if (!t || (*t == 0 && n_free > 0)) certified = false;
    }
  }
  if (certified) {
    out.status = BoundStatus::BoundedCertified;
    out.certificate = std::to_string(sources.size()) + " source terms absorbed into " + std::to_string(sinks.size()) +
                      " sinks (" + std::to_string(n_free) + " with spare room, " + std::to_string(boundary.size()) +
                      " on the hull boundary)";
    return out;
  }

  if (search_witness) {
    RayExpression expr;
    expr.F = F;
    expr.penalties = penalties_for(F, q, weight);
    if (!mode.power) {
      expr.mass = mode.mass;
    } else if (mode.C) {
      expr.power_kappa = mode.kappa;
      expr.power_C = *mode.C;
    }
    for (const auto& ray : search_rays(n, {Rational(1, 2), Rational(1), Rational(2)}, 4)) {
      RayAnalysis ra = ray_leading(expr, ray);
      if (!ra.decided || !ra.diverges) continue;
      if (mode.power && !mode.C) {
        int R = 0;
        for (int i = 0; i < n; ++i)
          if (ray.a[i] != 0) R = std::max(R, ray.r[i]);
        if (!(ra.leading_exponent > mode.kappa * R)) continue;
      }
      out.status = BoundStatus::UnboundedWitness;
      out.witness = ray;
      return out;
    }
  }

  for (double rho : {10.0, 100.0, 1000.0}) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> idx(n, 0);
    const double pts[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    while (true) {
      std::vector<double> x(n);
      double norm = 0;
      for (int i = 0; i < n; ++i) {
        x[i] = pts[idx[i]];
        norm += x[i] * x[i];
      }
      if (norm > 0) {
        for (auto& xi : x) xi *= rho / std::sqrt(norm);
        best = std::max(best, evaluate_expression(F, q, mode, weight, x));
      }
      int j = n - 1;
      while (j >= 0 && idx[j] == 4) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
    out.grid_advisory.emplace_back(rho, best);
  }
  return out;
}

}  // namespace gibbs
