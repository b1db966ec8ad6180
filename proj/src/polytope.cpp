#include "gibbs/errors.hpp"
#include "gibbs/lp.hpp"
#include "gibbs/polynomial.hpp"

namespace gibbs {

std::set<MultiIndex> lower_set(const Polynomial& F) {
  std::set<MultiIndex> out;
  for (const auto& beta : F.support())
    for (auto& g : box_below(beta))
      if (g != beta) out.insert(g);
  return out;
}

QMap constant_q(const Polynomial& F, const Rational& value) {
  QMap q;
  for (const auto& b : lower_set(F)) q[b] = value;
  return q;
}

namespace {

std::vector<Rational> intercepts(int n, const std::vector<std::vector<Rational>>& gens) {
  // Variables: one weight per generator, slack for sum <= 1, then t.
  const std::size_t K = gens.size();
  std::vector<Rational> out(n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<Rational>> A(n + 1, std::vector<Rational>(K + 2, Rational(0)));
    std::vector<Rational> b(n + 1, Rational(0));
    for (int i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < K; ++k) A[i][k] = gens[k][i];
      if (i == j) A[i][K + 1] = -1;
    }
    for (std::size_t k = 0; k <= K; ++k) A[n][k] = 1;
    b[n] = 1;
    std::vector<Rational> c(K + 2, Rational(0));
    c[K + 1] = 1;
    LpResult res = solve_lp(A, b, c);
    if (res.status != LpStatus::Optimal) throw InconsistencyError("hull intercept LP not optimal");
    out[j] = res.value;
  }
  return out;
}

std::vector<std::vector<Rational>> q_generators(const Polynomial& F, const QMap& q) {
  std::vector<std::vector<Rational>> gens;
  for (const auto& b : lower_set(F)) {
    auto it = q.find(b);
    if (it == q.end()) throw ConfigError("q is missing an entry for " + to_string(b));
    if (it->second <= 0) throw ConfigError("q must be positive at " + to_string(b));
    std::vector<Rational> g(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) g[i] = it->second * b[i];
    gens.push_back(std::move(g));
  }
  return gens;
}

}  // namespace

std::vector<Rational> hull_intercepts(const Polynomial& F, const QMap& q) {
  return intercepts(F.nvars(), q_generators(F, q));
}

std::vector<Rational> hull_intercepts_tilde(const Polynomial& F, const QMap& q, const Rational& kappa) {
  if (kappa <= 0) throw ConfigError("taming exponent kappa must be positive");
  auto gens = q_generators(F, q);
  for (int i = 0; i < F.nvars(); ++i) {
    std::vector<Rational> g(F.nvars(), Rational(0));
    g[i] = kappa;
    gens.push_back(std::move(g));
  }
  return intercepts(F.nvars(), gens);
}

std::vector<std::vector<EpsPair>> constraint_sets(const MultiIndex& beta, const ModelParams& params,
                                                  const std::vector<Rational>& kappa) {
  const int n = static_cast<int>(beta.size());
  const Rational w = (Rational(params.d) - 2 * params.alpha) / (2 * params.d);
  const Rational half(1, 2);
  std::vector<std::vector<EpsPair>> out(n);
  for (int i = 0; i < n; ++i) {
    if (beta[i] == 0) {
      out[i].push_back({MultiIndex(n, 0), MultiIndex(n, 0)});
      continue;
    }
    MultiIndex target = beta;
    target[i] -= 1;
    MultiIndex eps(n, 0);
    // Odometer over eps_j in [0, target_j]; eps~ is the complement.
    while (true) {
      MultiIndex et = target - eps;
      bool ok = true;
      Rational lhs = w * degree(eps);
      for (int j = 0; j < n && ok; ++j) {
        if (et[j] == 0) continue;
        if (kappa[j] == 0)
          ok = false;
        else
          lhs += Rational(et[j]) / kappa[j];
      }
      if (ok && lhs <= half) out[i].push_back({eps, et});
      int j = n - 1;
      while (j >= 0 && eps[j] == target[j]) eps[j--] = 0;
      if (j < 0) break;
      ++eps[j];
    }
  }
  return out;
}

ExtRational b_of_beta(const MultiIndex& beta, const ModelParams& params, const std::vector<Rational>& kappa,
                      bool restrict_nonzero) {
  const auto sets = constraint_sets(beta, params, kappa);
  bool any_axis = false;
  ExtRational best(Rational(0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (restrict_nonzero && beta[i] == 0) continue;
    any_axis = true;
    ExtRational axis_min = ExtRational::infinity();
    for (const auto& pr : sets[i]) {
      Rational v = Rational(1 + degree(pr.eps), 2);
      for (std::size_t j = 0; j < beta.size(); ++j)
        if (pr.eps_tilde[j] != 0) v += Rational(pr.eps_tilde[j]) / kappa[j];
      axis_min = min(axis_min, ExtRational(v));
    }
    best = max(best, axis_min);
  }
  if (!any_axis) return ExtRational(Rational(1, 2));
  return best;
}

ExtMap p_from_intercepts(const Polynomial& F, const ModelParams& params, const std::vector<Rational>& kappa,
                         bool restrict_nonzero) {
  const auto A = F.support();
  const Rational two_a = 2 * params.alpha;
  const Rational gap = Rational(params.d) - two_a;
  ExtMap out;
  for (const auto& beta : lower_set(F)) {
    const ExtRational b = b_of_beta(beta, params, kappa, restrict_nonzero);
    ExtRational p(Rational(1));
    for (const auto& xi : A) {
      if (!less(beta, xi)) continue;
      const Rational D = gap * degree(xi - beta);
      if (D == 0) continue;  // ratio is exactly 1
      if (b.is_infinite()) {
        p = ExtRational::infinity();
        break;
      }
      const Rational den = two_a - D * b.value();
      if (den <= 0) {
        p = ExtRational::infinity();
        break;
      }
      p = max(p, ExtRational((two_a - D) / den));
    }
    out[beta] = p;
  }
  return out;
}

ExtMap p_map(const Polynomial& F, const ModelParams& params, const QMap& q, bool restrict_nonzero) {
  return p_from_intercepts(F, params, hull_intercepts(F, q), restrict_nonzero);
}

ExtMap p_map_tilde(const Polynomial& F, const ModelParams& params, const QMap& q, const Rational& kappa,
                   bool restrict_nonzero) {
  return p_from_intercepts(F, params, hull_intercepts_tilde(F, q, kappa), restrict_nonzero);
}

}  // namespace gibbs
