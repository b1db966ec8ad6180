#pragma once

#include "gibbs/multi_index.hpp"
#include "gibbs/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gibbs {

// Interaction polynomial F(x) = sum_beta c_beta x^beta over R^n with exact
// rational coefficients. Zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(int nvars);

  void add_term(const MultiIndex& beta, const Rational& c);
  int nvars() const { return nvars_; }
  int degree() const;
  bool empty() const { return terms_.empty(); }
  const std::map<MultiIndex, Rational>& terms() const { return terms_; }
  Rational coefficient(const MultiIndex& beta) const;
  // Support A of F, excluding the constant monomial.
  std::set<MultiIndex> support() const;
  Polynomial scaled(const Rational& s) const;
  double evaluate(const std::vector<double>& x) const;
  std::string to_string() const;

 private:
  int nvars_;
  std::map<MultiIndex, Rational> terms_;
};

// Parses e.g. "x1*x2^3 - 100*x1^6" or "-3/2 x^4 + y". Variables are
// x1..xn; for n <= 3 the aliases x, y, z are accepted as well.
Polynomial parse_polynomial(const std::string& text, int nvars);

struct ModelParams {
  int d = 1;
  int n = 1;
  Rational alpha = Rational(1, 2);

  bool critical() const { return 2 * alpha == Rational(d); }
  double alpha_d() const { return to_double(alpha); }
};

// Throws ConfigError unless (k-1)d/(2k) < alpha <= d/2 with k = deg F and
// n matches the polynomial.
void check_regime(const Polynomial& F, const ModelParams& params);

using QMap = std::map<MultiIndex, Rational>;
using ExtMap = std::map<MultiIndex, ExtRational>;

// A^- : every gamma with gamma < beta for some beta in A (contains 0).
std::set<MultiIndex> lower_set(const Polynomial& F);
QMap constant_q(const Polynomial& F, const Rational& value);

// kappa_j(q) = max{t >= 0 : t e_j in Conv({q(b) b : b in A^-} u {0})},
// solved as an exact linear program per axis.
std::vector<Rational> hull_intercepts(const Polynomial& F, const QMap& q);
// Same with the extra generators kappa*e_i for every axis i.
std::vector<Rational> hull_intercepts_tilde(const Polynomial& F, const QMap& q,
                                            const Rational& kappa);

struct EpsPair {
  MultiIndex eps;
  MultiIndex eps_tilde;
};

// R^i(beta) for each axis i. Axes with beta_i = 0 get the single zero pair.
std::vector<std::vector<EpsPair>> constraint_sets(const MultiIndex& beta,
                                                  const ModelParams& params,
                                                  const std::vector<Rational>& kappa);

// b(beta) = max_i min over R^i(beta) of (1 + |eps|)/2 + sum_j eps~_j/kappa_j.
// An empty R^i makes the value +infinity. With restrict_nonzero the max
// runs over axes with beta_i != 0 only.
ExtRational b_of_beta(const MultiIndex& beta, const ModelParams& params,
                      const std::vector<Rational>& kappa, bool restrict_nonzero = false);

// p(beta) = 1 v max over xi in A, xi > beta of
// [2a - (d-2a)|xi-beta|] / [2a - (d-2a)|xi-beta| b(beta)], with +infinity
// whenever the denominator is non-positive.
ExtMap p_map(const Polynomial& F, const ModelParams& params, const QMap& q,
             bool restrict_nonzero = false);
ExtMap p_map_tilde(const Polynomial& F, const ModelParams& params, const QMap& q,
                   const Rational& kappa, bool restrict_nonzero = false);
ExtMap p_from_intercepts(const Polynomial& F, const ModelParams& params,
                         const std::vector<Rational>& kappa, bool restrict_nonzero = false);

}  // namespace gibbs
