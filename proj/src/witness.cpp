#include "gibbs/drift.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>

namespace gibbs {

std::string to_string(DriftFamily f) {
  switch (f) {
    case DriftFamily::ConstShift: return "CONST_SHIFT";
    case DriftFamily::Bump: return "BUMP";
    case DriftFamily::Critical: return "CRITICAL";
    case DriftFamily::Parametric: return "PARAMETRIC";
  }
  return "?";
}

DriftFamily parse_drift_family(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "CONST_SHIFT" || u == "CONST") return DriftFamily::ConstShift;
  if (u == "BUMP") return DriftFamily::Bump;
  if (u == "CRITICAL") return DriftFamily::Critical;
  if (u == "PARAMETRIC") return DriftFamily::Parametric;
  throw ConfigError("unknown drift family '" + s + "'");
}

RayExpression witness_expression(const Polynomial& F, const ModelParams& params, const WitnessHypothesis& hyp) {
  RayExpression expr;
  expr.F = F;
  expr.mass = hyp.mass;
  if (params.critical())
    expr.penalties = unit_penalties(F, hyp.C);
  else
    expr.penalties = penalties_for(F, constant_q(F, hyp.q), Rational(1));
  return expr;
}

Rational witness_kappa2(const Polynomial& F, const Ray& ray, const Rational& q) {
  Rational best = 0;
  for (const auto& b : lower_set(F))
    if (monomial_at(b, ray.a) != 0) best = std::max(best, Rational(q * dot(b, ray.r)));
  return best;
}

std::vector<std::pair<MultiIndex, MultiIndex>> leading_pairs(const Polynomial& F, const ModelParams& params,
                                                             const Ray& ray, const Rational& e) {
  const Rational gap = Rational(params.d) - 2 * params.alpha;
  std::vector<std::pair<MultiIndex, MultiIndex>> best;
  Rational best_exp = 0;
  int best_deg = -1;
  for (const auto& [beta, c] : F.terms()) {
    if (degree(beta) == 0 || c == 0) continue;
    for (const auto& gamma : box_below(beta)) {
      if (degree(gamma) == 0) continue;
      const MultiIndex rest = beta - gamma;
      if (monomial_at(rest, ray.a) == 0) continue;
      const Rational ex = Rational(degree(gamma)) * gap / 2 + e * dot(rest, ray.r);
      const int deg = degree(gamma);
      if (best_deg < 0 || ex > best_exp || (ex == best_exp && deg > best_deg)) {
        best.clear();
        best_exp = ex;
        best_deg = deg;
      }
      if (ex == best_exp && deg == best_deg) best.emplace_back(beta, gamma);
    }
  }
  return best;
}

double p_tilde(const Polynomial& F, const Ray& ray, const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
               double eta, const std::vector<double>& b) {
  double total = 0;
  for (const auto& [beta, gamma] : pairs) {
    const double c = to_double(F.coefficient(beta));
    total -= c * binomial(beta, gamma) * hermite_multi(gamma, b, eta) * to_double(monomial_at(beta - gamma, ray.a));
  }
  return total;
}

std::pair<double, std::vector<double>> choose_eta_b(const Polynomial& F, const Ray& ray,
                                                    const std::vector<std::pair<MultiIndex, MultiIndex>>& pairs,
                                                    const WitnessOptions& opt) {
  const int n = static_cast<int>(ray.a.size());
  std::vector<double> etas = opt.eta ? std::vector<double>{*opt.eta} : opt.eta_grid;
  for (double eta : etas)
    if (!(eta > 0 && eta < 1)) throw ConfigError("eta must lie in (0, 1)");
  std::vector<std::vector<double>> bs;
  if (opt.b) {
    if (static_cast<int>(opt.b->size()) != n) throw ConfigError("b has the wrong length");
    bs.push_back(*opt.b);
  } else {
    if (opt.b_values.empty()) throw ConfigError("empty b grid");
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<double> b(n);
      for (int i = 0; i < n; ++i) b[i] = opt.b_values[idx[i]];
      bs.push_back(b);
      int i = n - 1;
      while (i >= 0 && idx[i] + 1 == opt.b_values.size()) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
    std::stable_sort(bs.begin(), bs.end(), [](const auto& x, const auto& y) {
      double nx = 0, ny = 0;
      for (double v : x) nx += v * v;
      for (double v : y) ny += v * v;
      return nx < ny;
    });
  }
  for (double eta : etas)
    for (const auto& b : bs)
      if (p_tilde(F, ray, pairs, eta, b) < -1e-12) return {eta, b};
  throw ConfigError("no (eta, b) on the grid makes the leading cross term negative");
}

namespace {

// Scalar field placed on component c of an n-component field.
void add_component(SpectralField& out, int c, const SpectralField& f, double scale) {
  const ModeSet& src = *f.modes;
  for (int i = 0; i < src.size(); ++i) {
    const int j = out.modes->index_of(src.mode(i));
    if (j < 0) throw ConfigError("shift exceeds the field cutoff");
    out.coef[c][j] += scale * f.coef[0][i];
  }
}

int zero_mode(const ModeSet& ms) {
  std::vector<int> z(ms.d(), 0);
  return ms.index_of(z.data());
}

RayAnalysis divergent(const RayExpression& expr, const Ray& ray) {
  RayAnalysis ra = ray_leading(expr, ray);
  if (!ra.decided || !ra.diverges || !(ra.leading_exponent > 0))
    throw ConfigError("no divergent ray available: " + to_string(ray) + " does not diverge for this hypothesis");
  return ra;
}

void finish(DriftWitnessSpec& spec, const ModelParams& params) {
  spec.drift.M = spec.M;
  spec.drift.eta = spec.eta;
  spec.drift.cancel_noise = true;
  spec.kinetic_expected = kinetic_expected(spec.drift, params.alpha_d(), std::max(spec.support, spec.M));
}

}  // namespace

DriftWitnessSpec build_const_witness(const Polynomial& F, const ModelParams& params, const Ray& ray,
                                     const WitnessHypothesis& hyp, int M, const Rational& delta,
                                     const WitnessOptions& opt) {
  check_regime(F, params);
  if (M < 1) throw ConfigError("witness cutoff M must be positive");
  if (static_cast<int>(ray.a.size()) != params.n || static_cast<int>(ray.r.size()) != params.n)
    throw ConfigError("ray has the wrong number of components");
  if (delta < 0) throw ConfigError("delta must be nonnegative");
  const RayAnalysis ra = divergent(witness_expression(F, params, hyp), ray);

  DriftWitnessSpec spec;
  spec.family = DriftFamily::ConstShift;
  spec.M = M;
  spec.ray = ray;
  spec.kappa1 = ra.leading_exponent;
  spec.kappa2 = witness_kappa2(F, ray, params.critical() ? Rational(1) : hyp.q);
  spec.delta = delta;
  if (params.critical() && delta == 0) throw ConfigError("delta must be positive at alpha = d/2");
  if (!params.critical() && spec.kappa1 == spec.kappa2) spec.delta = 0;
  spec.scale_exponent = (Rational(params.d) + spec.delta) / spec.kappa1;
  spec.leading_pairs = leading_pairs(F, params, ray, spec.scale_exponent);
  std::tie(spec.eta, spec.b) = choose_eta_b(F, ray, spec.leading_pairs, opt);
  spec.p_tilde = p_tilde(F, ray, spec.leading_pairs, spec.eta, spec.b);

  const double sigma = sigma_alpha_N(params.d, params.alpha_d(), M);
  spec.drift.shift = SpectralField::zeros(params.d, params.n, 0);
  const int z = zero_mode(*spec.drift.shift.modes);
  for (int i = 0; i < params.n; ++i) {
    const double a = to_double(ray.a[i]) * std::pow(static_cast<double>(M), to_double(spec.scale_exponent * ray.r[i]));
    spec.amplitude.push_back(a);
    spec.drift.shift.coef[i][z] = a + std::sqrt(sigma) * spec.b[i];
  }
  finish(spec, params);
  return spec;
}

DriftWitnessSpec build_bump_witness(const Polynomial& F, const ModelParams& params, const Ray& ray,
                                    const Rational& C, int M, const WitnessOptions& opt, const BumpShape& shape) {
  check_regime(F, params);
  if (!params.critical()) throw ConfigError("the bump witness is defined at alpha = d/2");
  if (M < 2) throw ConfigError("bump witness needs M >= 2");
  if (static_cast<int>(ray.a.size()) != params.n || static_cast<int>(ray.r.size()) != params.n)
    throw ConfigError("ray has the wrong number of components");
  WitnessHypothesis hyp;
  hyp.mass = 0;
  hyp.C = C;
  const RayAnalysis ra = divergent(witness_expression(F, params, hyp), ray);
  int r_max = 0;
  for (int i = 0; i < params.n; ++i)
    if (ray.a[i] != 0) r_max = std::max(r_max, ray.r[i]);
  if (r_max == 0 || ra.leading_exponent < 4 * r_max)
    throw ConfigError("no divergent ray available: the taming witness needs growth exponent >= 4 r_max");

  DriftWitnessSpec spec;
  spec.family = DriftFamily::Bump;
  spec.M = M;
  spec.ray = ray;
  spec.kappa1 = ra.leading_exponent;
  spec.kappa2 = witness_kappa2(F, ray, Rational(1));
  spec.scale_exponent = 1;
  spec.leading_pairs = leading_pairs(F, params, ray, Rational(1));
  std::tie(spec.eta, spec.b) = choose_eta_b(F, ray, spec.leading_pairs, opt);
  spec.p_tilde = p_tilde(F, ray, spec.leading_pairs, spec.eta, spec.b);
  spec.profile_r = 2 * r_max;

  const BumpProfile g = build_bump(shape, params.d, M, spec.profile_r);
  spec.support = r_max * M;
  spec.drift.shift = SpectralField::zeros(params.d, params.n, spec.support);
  const double logM = std::log(static_cast<double>(M));
  const double sigma = sigma_alpha_N(params.d, params.alpha_d(), M);
  const int z = zero_mode(*spec.drift.shift.modes);
  for (int i = 0; i < params.n; ++i) {
    const double a = to_double(ray.a[i]) * std::pow(logM, ray.r[i]);
    spec.amplitude.push_back(a);
    if (ray.a[i] != 0) {
      if (ray.r[i] == 0)
        spec.drift.shift.coef[i][z] += a;
      else
        add_component(spec.drift.shift, i, field_power(g.field, ray.r[i]), a);
    }
    spec.drift.shift.coef[i][z] += std::sqrt(sigma) * spec.b[i];
  }
  finish(spec, params);
  return spec;
}

DriftWitnessSpec build_critical_witness(const Polynomial& F, const ModelParams& params, int M, double eta,
                                        const BumpShape& shape) {
  check_regime(F, params);
  if (params.n != 2 || params.alpha != Rational(4 * params.d, 9))
    throw ConfigError("the critical witness needs n = 2 and alpha = 4d/9");
  const MultiIndex xy3{1, 3}, x6{6, 0};
  for (const auto& [beta, c] : F.terms())
    if (c != 0 && beta != xy3 && beta != x6) throw ConfigError("the critical witness needs F = c1 x y^3 + c6 x^6");
  const double c1 = to_double(F.coefficient(xy3));
  const double c6 = to_double(F.coefficient(x6));
  if (!(c1 > 0 && c6 < 0)) throw ConfigError("the critical witness needs c1 > 0 > c6");
  if (!(eta > 0 && eta < 1)) throw ConfigError("eta must lie in (0, 1)");
  if (M < 1) throw ConfigError("witness cutoff M must be positive");

  DriftWitnessSpec spec;
  spec.family = DriftFamily::Critical;
  spec.M = M;
  spec.eta = eta;
  spec.b = {0, 0};
  spec.ray = Ray{{Rational(1), Rational(1)}, {3, 5}};
  spec.profile_r = 9;
  const BumpProfile g = build_bump(shape, params.d, M, spec.profile_r);
  const double sigma = sigma_alpha_N(params.d, params.alpha_d(), M);
  spec.beta_M = std::sqrt(2 * eta * sigma / power_integral(g.field, 10));

  // c1 a B^3 + c6 a^6 = c1 a B^3 / 2, divided by a > 0.
  const double B3 = std::pow(spec.beta_M, 3);
  auto phi = [&](double a) { return c1 * B3 / 2 + c6 * std::pow(a, 5); };
  double hi = 1;
  for (int k = 0; phi(hi) > 0; ++k) {
    if (k > 200) throw ConfigError("critical witness: root not bracketed");
    hi *= 2;
  }
  boost::uintmax_t iters = 200;
  auto [lo_a, hi_a] = boost::math::tools::toms748_solve(phi, 0.0, hi, phi(0.0), phi(hi),
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  spec.alpha_M = 0.5 * (lo_a + hi_a);
  spec.amplitude = {spec.alpha_M, spec.beta_M};

  spec.support = 5 * M;
  spec.drift.shift = SpectralField::zeros(params.d, 2, spec.support);
  add_component(spec.drift.shift, 0, field_power(g.field, 3), spec.alpha_M);
  add_component(spec.drift.shift, 1, field_power(g.field, 5), spec.beta_M);
  finish(spec, params);
  return spec;
}

Ray default_witness_ray(const Polynomial& F, const ModelParams& params, DriftFamily family,
                        const WitnessHypothesis& hyp, const SearchBoxes& boxes) {
  if (family == DriftFamily::Critical) return Ray{{Rational(1), Rational(1)}, {3, 5}};
  if (family == DriftFamily::Parametric) throw ConfigError("the parametric family has no witness ray");
  WitnessHypothesis h = hyp;
  if (family == DriftFamily::Bump) h.mass = 0;
  const RayExpression expr = witness_expression(F, params, h);
  for (const auto& mags : {std::vector<Rational>{Rational(1)}, boxes.a_magnitudes})
    for (const auto& ray : search_rays(params.n, mags, boxes.r_max)) {
      const RayAnalysis ra = ray_leading(expr, ray);
      if (!ra.decided || !ra.diverges || !(ra.leading_exponent > 0)) continue;
      if (family == DriftFamily::Bump) {
        int r_max = 0;
        for (int i = 0; i < params.n; ++i)
          if (ray.a[i] != 0) r_max = std::max(r_max, ray.r[i]);
        if (r_max == 0 || ra.leading_exponent < 4 * r_max) continue;
      }
      {
        try {
          const Rational e =
              family == DriftFamily::Bump ? Rational(1) : (Rational(params.d) + 1) / ra.leading_exponent;
          choose_eta_b(F, ray, leading_pairs(F, params, ray, e), {});
        } catch (const ConfigError&) {
          continue;
        }
      }
      return ray;
    }
  throw ConfigError("no divergent ray available in the search box");
}

}  // namespace gibbs
