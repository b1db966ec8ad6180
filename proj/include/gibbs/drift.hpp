#pragma once

#include "gibbs/criteria.hpp"
#include "gibbs/estimator.hpp"
#include "gibbs/field.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gibbs {

// ---- bump profiles ----

// Base profile f^(xi) = A exp(-1/(1 - |xi/rho|^2)) for |xi| < rho, 0 outside.
// With normalize set, A makes int_{R^d} f^ = 1, so f_M(0) ~ M^{d/r}.
struct BumpShape {
  double rho = 1;
  bool normalize = true;
};
double bump_hat(const BumpShape& shape, int d, double xi2);
double bump_amplitude(const BumpShape& shape, int d);

// f_M(x) = M^{d/r - d} sum_{|l| <= M} f^(l/M) e_l(x).
struct BumpProfile {
  BumpShape shape;
  int d = 1;
  int M = 1;
  double r = 1;
  SpectralField field = SpectralField::zeros(1, 1, 0);
};
BumpProfile build_bump(const BumpShape& shape, int d, int M, double r);

// Fourier coefficients of f^p (integer p >= 1), exact up to rounding:
// computed on a grid fine enough that the product does not alias.
SpectralField field_power(const SpectralField& f, int p);
// Coefficients of a grid function projected onto |l| <= N.
SpectralField project_grid(const std::vector<double>& values, int d, int G, int N);

// int_{T^d} |f|^p dx. Exact grid quadrature for even integer p; other p are
// evaluated on an 8x oversampled grid.
double power_integral(const SpectralField& f, double p);
// int |<grad>^beta (f^p)|^2 dx for integer p.
double hbeta_power_norm2(const SpectralField& f, int p, double beta);

struct LogLogFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
// Least squares of log y against log x.
LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct MomentRow {
  double s = 0;
  double r = 0;
  int d = 1;
  double expected = 0;  // sd - d
  LogLogFit fit;
  std::vector<double> values;
};
// Fits log int |f_M|^{sr} against log M.
MomentRow moment_scan(const BumpShape& shape, int d, double r, double s, const std::vector<int>& Ms);

struct HbetaRow {
  double s = 0;
  double r = 0;
  double beta = 0;
  int d = 1;
  double bound = 0;  // 2 beta + 2sd - d
  LogLogFit fit;
};
// Needs sr to be an integer.
HbetaRow hbeta_scan(const BumpShape& shape, int d, double r, double s, double beta, const std::vector<int>& Ms);

// ---- witness drifts ----

enum class DriftFamily { ConstShift, Bump, Critical, Parametric };
std::string to_string(DriftFamily f);
DriftFamily parse_drift_family(const std::string& s);

// Which divergence hypothesis the witness ray satisfies. At alpha = d/2 the
// penalty is C sum |x^beta| (C empty only for Bump, which uses C = 1);
// below it, sum |x^beta|^q with the constant q.
struct WitnessHypothesis {
  Rational mass = Rational(51, 100);
  Rational C = 1;
  Rational q = 1;
};

struct WitnessOptions {
  std::vector<double> eta_grid{0.5, 0.75, 0.9, 0.99};
  std::vector<double> b_values{0, 1, -1, 2, -2};
  std::optional<double> eta;  // fixed eta, skipping the grid
  std::optional<std::vector<double>> b;
};

struct DriftWitnessSpec {
  DriftFamily family = DriftFamily::ConstShift;
  int M = 0;
  double eta = 0;
  std::vector<double> b;
  std::optional<Ray> ray;
  Rational delta = 0;
  Rational kappa1 = 0;
  Rational kappa2 = 0;
  Rational scale_exponent = 0;  // (d + delta)/kappa1
  // (beta, gamma) pairs carrying the fastest-growing Hermite cross terms, and
  // their eta-b polynomial p~(eta, b).
  std::vector<std::pair<MultiIndex, MultiIndex>> leading_pairs;
  double p_tilde = 0;
  std::vector<double> amplitude;  // a_M, or the profile factors
  double profile_r = 0;
  double alpha_M = 0;
  double beta_M = 0;
  int support = 0;  // largest |l| carried by the shift
  ShiftDrift drift;
  double kinetic_expected = 0;
};

// Ray expression F + penalties - m|x|^2 used by the witness, per regime.
RayExpression witness_expression(const Polynomial& F, const ModelParams& params, const WitnessHypothesis& hyp);

// kappa_2 = max over beta in A^- with a^beta != 0 of q(beta)(beta.r).
Rational witness_kappa2(const Polynomial& F, const Ray& ray, const Rational& q);

// The (beta, gamma) with 0 < gamma <= beta, a^{beta-gamma} != 0 maximising
// the growth of sigma_M^{|gamma|/2} M^{e (beta-gamma).r}: first the exponent
// |gamma|(d - 2 alpha)/2 + e (beta-gamma).r, then |gamma| (the log power at
// alpha = d/2).
std::vector<std::pair<MultiIndex, MultiIndex>> leading_pairs(const Polynomial& F, const ModelParams& params,
                                                             const Ray& ray, const Rational& e);

// p~(eta, b) = -sum_{(beta,gamma)} c_beta C(beta,gamma) H_gamma(b; eta) a^{beta-gamma}.
double p_tilde(const Polynomial& F, const Ray& ray, const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
               double eta, const std::vector<double>& b);

// Smallest eta of the grid, then smallest |b|, with p~ < 0.
std::pair<double, std::vector<double>> choose_eta_b(const Polynomial& F, const Ray& ray,
                                                    const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
                                                    const WitnessOptions& opt);

// theta^M = -<grad>^alpha Z_M^eta + a_r(M^{(d+delta)/kappa_1}) + sigma_M^{1/2} b.
DriftWitnessSpec build_const_witness(const Polynomial& F, const ModelParams& params, const Ray& ray,
                                     const WitnessHypothesis& hyp, int M, const Rational& delta,
                                     const WitnessOptions& opt = {});

// Taming witness at alpha = d/2: shift a_r((log M) g_M) + sigma_M^{1/2} b with
// g_M = f_M at r = 2 r_max.
DriftWitnessSpec build_bump_witness(const Polynomial& F, const ModelParams& params, const Ray& ray,
                                    const Rational& C, int M, const WitnessOptions& opt = {},
                                    const BumpShape& shape = {});

// F = c1 x y^3 + c6 x^6 (c1 > 0 > c6) at alpha = 4d/9: shift (alpha_M g_M^3,
// beta_M g_M^5) with g_M = f_M at r = 9, beta_M^2 = 2 eta sigma_M / int g_M^10
// and c1 alpha_M beta_M^3 + c6 alpha_M^6 = c1 alpha_M beta_M^3 / 2.
DriftWitnessSpec build_critical_witness(const Polynomial& F, const ModelParams& params, int M, double eta = 0.5,
                                        const BumpShape& shape = {});

// Finds a ray for the family from the criteria engine and builds the witness.
Ray default_witness_ray(const Polynomial& F, const ModelParams& params, DriftFamily family,
                        const WitnessHypothesis& hyp, const SearchBoxes& boxes = {});

// ---- parametric family ----

struct OptimizeConfig {
  EstimatorConfig mc;
  int N = 16;
  int M = 4;  // bump cutoff
  double profile_r = 2;
  bool use_bump = true;
  double initial_step = 1;
  double min_step = 1e-3;
  int max_evaluations = 200;
};

struct OptimizeResult {
  std::vector<double> v;  // constant shift
  std::vector<double> s;  // bump multiples, empty without the bump
  ObjectiveEstimate best;
  ObjectiveEstimate zero;  // theta = 0 on the same samples
  int evaluations = 0;
  ShiftDrift drift;
};

// shift_i = v_i + s_i f_M with no noise cancellation.
ShiftDrift parametric_drift(const ModelParams& params, const std::vector<double>& v, const std::vector<double>& s,
                            const BumpProfile* bump);

// Compass search over (v, s) with common random numbers (fixed seed).
OptimizeResult optimize_parametric(const Polynomial& F, const ModelParams& params, const OptimizeConfig& cfg);

}  // namespace gibbs
