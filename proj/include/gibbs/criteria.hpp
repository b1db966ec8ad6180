#pragma once

#include "gibbs/polynomial.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gibbs {

// Curve x -> a_r(x) = (a_1 x^{r_1}, ..., a_n x^{r_n}), x -> +infinity.
struct Ray {
  std::vector<Rational> a;
  std::vector<int> r;
};
std::string to_string(const Ray& ray);
Rational monomial_at(const MultiIndex& beta, const std::vector<Rational>& a);  // a^beta

// weight * |x^beta|^q
struct PenaltyTerm {
  MultiIndex beta;
  Rational q;
  Rational weight;
};
std::vector<PenaltyTerm> penalties_for(const Polynomial& F, const QMap& q, const Rational& weight);
std::vector<PenaltyTerm> unit_penalties(const Polynomial& F, const Rational& weight);

// F + sum penalties - mass |x|^2 - power_C |x|^power_kappa
struct RayExpression {
  Polynomial F{1};
  std::vector<PenaltyTerm> penalties;
  Rational mass = 0;
  std::optional<Rational> power_kappa;
  Rational power_C = 0;
};

struct RayAnalysis {
  // False when the sign at the first non-cancelling exponent could not be
  // resolved (irrational ties or truncated lower-order terms).
  bool decided = true;
  bool diverges = false;
  Rational leading_exponent = 0;
  double leading_coefficient = 0;
  bool exact = true;
};

RayAnalysis ray_leading(const RayExpression& expr, const Ray& ray);

// Rays of the default search box for n variables: a_i in {0, +-m : m in
// magnitudes}, r in {0..r_max}^n, excluding rays that stay bounded.
std::vector<Ray> search_rays(int n, const std::vector<Rational>& magnitudes, int r_max);

enum class BoundStatus { BoundedCertified, UnboundedWitness, Inconclusive };
std::string to_string(BoundStatus s);

// Either subtract mass*|x|^2, or C|x|^kappa. An empty C in power mode means
// "some C > 0", so the power sinks have unlimited budget and an unbounded
// witness must diverge for every C.
struct BoundMode {
  bool power = false;
  Rational mass = 0;
  Rational kappa = 0;
  std::optional<Rational> C;
};

struct BoundResult {
  BoundStatus status = BoundStatus::Inconclusive;
  std::optional<Ray> witness;
  std::string certificate;
  // max of the expression on shells of radius 10^j, j = 1..3, when inconclusive
  std::vector<std::pair<double, double>> grid_advisory;
};

// Three-valued boundedness check of sup_x F + sum_{A^-} weight|x^b|^{q(b)} - sink.
// The certificate absorbs every source monomial into the negative even
// monomials of F and the sink via weighted AM-GM, with the weights found by
// an exact LP.
BoundResult check_bounded(const Polynomial& F, const QMap& q, const BoundMode& mode,
                          bool search_witness = true, const Rational& weight = 1);

enum class Status { Normalizable, NonNormalizable, CriticalTag, Unknown };
std::string to_string(Status s);

struct SearchBoxes {
  std::vector<Rational> a_magnitudes{Rational(1, 2), Rational(1), Rational(2)};
  int r_max = 4;
  std::vector<Rational> q_sufficient{Rational(11, 10), Rational(3, 2), Rational(2)};
  std::vector<Rational> q_necessary{Rational(1), Rational(11, 10), Rational(3, 2), Rational(2)};
  std::vector<Rational> q_steps{Rational(1, 10), Rational(1, 20), Rational(1, 50)};
  int q_iterations = 8;
  std::vector<Rational> m_sufficient{Rational(1, 4), Rational(2, 5), Rational(49, 100)};
  std::vector<Rational> m_necessary{Rational(51, 100), Rational(3, 5), Rational(1)};
  std::vector<Rational> C_grid{Rational(1), Rational(10), Rational(1000)};
  std::vector<Rational> kappa_offsets{Rational(1, 2), Rational(1, 4), Rational(1, 10)};
  bool restrict_nonzero_axes = false;
};

struct Verdict {
  Status status = Status::Unknown;
  std::string claim;    // "normalizability" or "taming"
  std::string theorem;  // which criterion produced the status
  std::optional<Ray> witness;
  std::vector<std::pair<std::string, std::string>> evidence;
  std::vector<std::string> notes;
};

// Sufficiency and necessity halves; each returns Unknown when it cannot
// certify its own status.
Verdict check_normalizable(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes = {});
Verdict check_non_normalizable(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes = {});
// Both halves combined. Throws InconsistencyError if both certify.
Verdict classify_normalizability(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes = {});
// Taming (grand-canonical) version, with CRITICAL_TAG for the endpoint case.
Verdict check_grand_canonical(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes = {});

// min over eta of max over (beta, xi) of
//   |xi-beta|(d-2a)/2 + factor*d(beta.r)/(q(eta)(eta.r)) - (factor-1)d,
// with eta.r = 0 excluded. nullopt if either index set is empty.
std::optional<Rational> ray_growth_margin(const Polynomial& F, const ModelParams& params, const QMap& q,
                                          const Ray& ray, int factor);

// Sufficiency q candidates: the constants, then for each step the iterates
// q <- (1+step) p(q) from q = 1, keeping those with q > p pointwise. With kappa set, p is
// the tilde map.
std::vector<QMap> sufficient_q_candidates(const Polynomial& F, const ModelParams& params,
                                          const SearchBoxes& boxes, const std::optional<Rational>& kappa);

}  // namespace gibbs
