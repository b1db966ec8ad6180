#include "gibbs/criteria.hpp"
#include "gibbs/errors.hpp"

#include <cmath>
#include <map>

namespace gibbs {

std::string to_string(const Ray& ray) {
  std::string s = "a=(";
  for (std::size_t i = 0; i < ray.a.size(); ++i) s += (i ? "," : "") + to_string(ray.a[i]);
  s += ") r=(";
  for (std::size_t i = 0; i < ray.r.size(); ++i) s += (i ? "," : "") + std::to_string(ray.r[i]);
  return s + ")";
}

Rational monomial_at(const MultiIndex& beta, const std::vector<Rational>& a) {
  Rational v = 1;
  for (std::size_t i = 0; i < beta.size(); ++i)
    for (int k = 0; k < beta[i]; ++k) v *= a[i];
  return v;
}

std::vector<PenaltyTerm> penalties_for(const Polynomial& F, const QMap& q, const Rational& weight) {
  std::vector<PenaltyTerm> out;
  for (const auto& b : lower_set(F)) {
    if (degree(b) == 0) continue;
    auto it = q.find(b);
    if (it == q.end()) throw ConfigError("q is missing an entry for " + to_string(b));
    out.push_back({b, it->second, weight});
  }
  return out;
}

std::vector<PenaltyTerm> unit_penalties(const Polynomial& F, const Rational& weight) {
  return penalties_for(F, constant_q(F, Rational(1)), weight);
}

namespace {

struct Bucket {
  Rational exact = 0;
  double inexact = 0;
  double scale = 0;
  bool has_inexact = false;
};

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

}  // namespace

RayAnalysis ray_leading(const RayExpression& expr, const Ray& ray) {
  const int n = expr.F.nvars();
  std::map<Rational, Bucket, std::greater<>> buckets;

  for (const auto& [beta, c] : expr.F.terms()) {
    Rational v = monomial_at(beta, ray.a);
    if (v == 0) continue;
    buckets[dot(beta, ray.r)].exact += c * v;
  }
  for (const auto& pen : expr.penalties) {
    Rational base = abs_r(monomial_at(pen.beta, ray.a));
    if (base == 0) continue;
    Bucket& bk = buckets[pen.q * dot(pen.beta, ray.r)];
    if (base == 1) {
      bk.exact += pen.weight;
    } else if (is_integer(pen.q)) {
      Rational p = 1;
      for (int k = 0; k < numerator(pen.q).convert_to<int>(); ++k) p *= base;
      bk.exact += pen.weight * p;
    } else {
      double v = to_double(pen.weight) * std::pow(to_double(base), to_double(pen.q));
      bk.inexact += v;
      bk.scale += std::abs(v);
      bk.has_inexact = true;
    }
  }
  if (expr.mass != 0) {
    for (int i = 0; i < n; ++i)
      if (ray.a[i] != 0) buckets[Rational(2 * ray.r[i])].exact -= expr.mass * ray.a[i] * ray.a[i];
  }
  // Only the leading term of C|a_r(x)|^kappa is kept; below it the
  // expansion is not tracked.
  std::optional<Rational> power_floor;
  if (expr.power_kappa && expr.power_C != 0) {
    int R = -1;
    for (int i = 0; i < n; ++i)
      if (ray.a[i] != 0) R = std::max(R, ray.r[i]);
    if (R >= 0) {
      Rational S = 0;
      bool lower = false;
      for (int i = 0; i < n; ++i) {
        if (ray.a[i] == 0) continue;
        if (ray.r[i] == R)
          S += ray.a[i] * ray.a[i];
        else
          lower = true;
      }
      const Rational e = *expr.power_kappa * R;
      Bucket& bk = buckets[e];
      const Rational half_k = *expr.power_kappa / 2;
      if (is_integer(half_k)) {
        Rational p = 1;
        for (int k = 0; k < numerator(half_k).convert_to<int>(); ++k) p *= S;
        bk.exact -= expr.power_C * p;
      } else {
        double v = to_double(expr.power_C) * std::pow(to_double(S), to_double(half_k));
        bk.inexact -= v;
        bk.scale += std::abs(v);
        bk.has_inexact = true;
      }
      if (lower && R > 0) power_floor = e;
    }
  }

  RayAnalysis out;
  for (const auto& [e, bk] : buckets) {
    if (power_floor && e < *power_floor) {
      out.decided = false;
      out.leading_exponent = e;
      return out;
    }
    if (e <= 0) break;
    if (!bk.has_inexact) {
      if (bk.exact == 0) continue;
      out.leading_exponent = e;
      out.leading_coefficient = to_double(bk.exact);
      out.diverges = bk.exact > 0;
      return out;
    }
    double total = to_double(bk.exact) + bk.inexact;
    double scale = std::abs(to_double(bk.exact)) + bk.scale;
    out.exact = false;
    out.leading_exponent = e;
    out.leading_coefficient = total;
    if (std::abs(total) <= 1e-9 * scale) {
      out.decided = false;
      return out;
    }
    out.diverges = total > 0;
    return out;
  }
  // Every positive exponent cancelled: the expression stays bounded.
  out.leading_exponent = 0;
  out.leading_coefficient = 0;
  out.diverges = false;
  return out;
}

std::vector<Ray> search_rays(int n, const std::vector<Rational>& magnitudes, int r_max) {
  std::vector<Rational> values{Rational(1), Rational(-1), Rational(0)};
  for (const auto& m : magnitudes)
    if (m != 1) {
      values.push_back(m);
      values.push_back(-m);
    }
  std::vector<std::vector<int>> rs;
  // r ordered by max entry, so simple rays are tried first.
  for (int top = 1; top <= r_max; ++top) {
    std::vector<int> r(n, 0);
    while (true) {
      int mx = 0;
      for (int v : r) mx = std::max(mx, v);
      if (mx == top) rs.push_back(r);
      int j = n - 1;
      while (j >= 0 && r[j] == top) r[j--] = 0;
      if (j < 0) break;
      ++r[j];
    }
  }
  std::vector<Ray> out;
  const int V = static_cast<int>(values.size());
  for (const auto& r : rs) {
    std::vector<int> idx(n, 0);
    while (true) {
      Ray ray{std::vector<Rational>(n), r};
      bool moves = false;
      for (int i = 0; i < n; ++i) {
        ray.a[i] = values[idx[i]];
        if (ray.a[i] != 0 && r[i] > 0) moves = true;
      }
      if (moves) out.push_back(ray);
      int j = n - 1;
      while (j >= 0 && idx[j] == V - 1) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  }
  return out;
}

}  // namespace gibbs
