#include "gibbs/criteria.hpp"

#include "gibbs/errors.hpp"

#include <algorithm>

namespace gibbs {

std::string to_string(Status s) {
  switch (s) {
    case Status::Normalizable: return "NORMALIZABLE";
    case Status::NonNormalizable: return "NON_NORMALIZABLE";
    case Status::CriticalTag: return "CRITICAL_TAG";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

std::string q_string(const QMap& q) {
  bool constant = true;
  for (const auto& [b, v] : q) constant &= v == q.begin()->second;
  if (constant && !q.empty()) return to_string(q.begin()->second) + " (constant)";
  std::string s = "{";
  bool first = true;
  for (const auto& [b, v] : q) {
    if (degree(b) == 0) continue;
    s += (first ? "" : ", ") + to_string(b) + ": " + to_string(v);
    first = false;
  }
  return s + "}";
}

bool dominates(const QMap& q, const ExtMap& p) {
  for (const auto& [b, pv] : p) {
    if (pv.is_infinite()) return false;
    auto it = q.find(b);
    if (it == q.end() || !(it->second > pv.value())) return false;
  }
  return true;
}

int ray_top(const Ray& ray) {
  int R = 0;
  for (std::size_t i = 0; i < ray.a.size(); ++i)
    if (ray.a[i] != 0) R = std::max(R, ray.r[i]);
  return R;
}

Verdict unknown(const std::string& claim, const Polynomial& F) {
  Verdict v;
  v.claim = claim;
  v.status = Status::Unknown;
  v.notes.push_back("no certificate or witness found within the search boxes");
  if (F.degree() == 2)
    v.notes.push_back("quadratic interaction: at the mass threshold c = 1/2 the case is open");
  return v;
}

const std::vector<Ray>& rays_for(int n, const SearchBoxes& boxes) {
  thread_local std::vector<std::pair<std::pair<int, int>, std::vector<Ray>>> cache;
  for (const auto& [key, rays] : cache)
    if (key.first == n && key.second == boxes.r_max) return rays;
  cache.push_back({{n, boxes.r_max}, search_rays(n, boxes.a_magnitudes, boxes.r_max)});
  return cache.back().second;
}

Rational taming_ceiling(const ModelParams& params) {
  return Rational(2 * params.d) / (Rational(params.d) - params.alpha);
}

}  // namespace

std::optional<Rational> ray_growth_margin(const Polynomial& F, const ModelParams& params, const QMap& q,
                                          const Ray& ray, int factor) {
  thread_local std::map<MultiIndex, Rational> cached_terms;
  thread_local std::set<MultiIndex> A, lower;
  if (cached_terms.empty() || cached_terms != F.terms()) {
    cached_terms = F.terms();
    A = F.support();
    lower = lower_set(F);
  }
  const Rational half_gap = (Rational(params.d) - 2 * params.alpha) / 2;
  std::optional<Rational> outer;
  for (const auto& eta : lower) {
    if (monomial_at(eta, ray.a) == 0) continue;
    const Rational er = dot(eta, ray.r);
    if (er == 0) continue;
    const Rational denom = q.at(eta) * er;
    std::optional<Rational> inner;
    for (const auto& beta : lower) {
      if (monomial_at(beta, ray.a) == 0) continue;
      for (const auto& xi : A) {
        if (!less(beta, xi)) continue;
        Rational v = half_gap * degree(xi - beta) + Rational(factor * params.d) * dot(beta, ray.r) / denom -
                     Rational((factor - 1) * params.d);
        if (!inner || v > *inner) inner = v;
      }
    }
    if (!inner) return std::nullopt;
    if (!outer || *inner < *outer) outer = inner;
  }
  return outer;
}

std::vector<QMap> sufficient_q_candidates(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes,
                                          const std::optional<Rational>& kappa) {
  auto pmap = [&](const QMap& q) {
    return kappa ? p_map_tilde(F, params, q, *kappa, boxes.restrict_nonzero_axes)
                 : p_map(F, params, q, boxes.restrict_nonzero_axes);
  };
  std::vector<QMap> out;
  for (const auto& c : boxes.q_sufficient) {
    QMap q = constant_q(F, c);
    if (dominates(q, pmap(q))) out.push_back(q);
  }
  for (const auto& step : boxes.q_steps) {
    QMap q = constant_q(F, Rational(1));
    for (int it = 0; it < boxes.q_iterations; ++it) {
      ExtMap p = pmap(q);
      QMap next;
      bool finite = true;
      for (const auto& [b, pv] : p) {
        if (pv.is_infinite()) {
          finite = false;
          break;
        }
        next[b] = (1 + step) * pv.value();
      }
      if (!finite) break;
      if (dominates(next, pmap(next)) && std::find(out.begin(), out.end(), next) == out.end()) out.push_back(next);
      if (next == q) break;
      q = std::move(next);
    }
  }
  return out;
}

Verdict check_normalizable(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes) {
  check_regime(F, params);
  std::vector<QMap> qs;
  if (params.critical()) {
    for (const auto& c : boxes.q_sufficient)
      if (c > 1) qs.push_back(constant_q(F, c));
  } else {
    qs = sufficient_q_candidates(F, params, boxes, std::nullopt);
  }
  for (const auto& q : qs) {
    for (const auto& m : boxes.m_sufficient) {
      if (m >= Rational(1, 2)) continue;
      BoundMode mode;
      mode.mass = m;
      BoundResult br = check_bounded(F, q, mode, false);
      if (br.status != BoundStatus::BoundedCertified) continue;
      Verdict v;
      v.claim = "normalizability";
      v.status = Status::Normalizable;
      v.theorem = params.critical() ? "mass_bound_critical" : "mass_bound_subcritical";
      v.evidence = {{"q", q_string(q)}, {"m", to_string(m)}, {"certificate", br.certificate}};
      return v;
    }
  }
  return unknown("normalizability", F);
}

Verdict check_non_normalizable(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes) {
  check_regime(F, params);
  const auto& rays = rays_for(F.nvars(), boxes);
  auto found = [&](const Ray& ray, std::vector<std::pair<std::string, std::string>> ev, const std::string& thm) {
    Verdict v;
    v.claim = "normalizability";
    v.status = Status::NonNormalizable;
    v.theorem = thm;
    v.witness = ray;
    ev.insert(ev.begin(), {"ray", to_string(ray)});
    v.evidence = std::move(ev);
    return v;
  };
  if (params.critical()) {
    std::vector<RayExpression> exprs;
    for (const auto& C : boxes.C_grid)
      for (const auto& m : boxes.m_necessary) {
        RayExpression expr;
        expr.F = F;
        expr.penalties = unit_penalties(F, C);
        expr.mass = m;
        exprs.push_back(std::move(expr));
      }
    for (const auto& ray : rays)
      for (std::size_t e = 0; e < exprs.size(); ++e) {
          const auto& C = boxes.C_grid[e / boxes.m_necessary.size()];
          const auto& m = boxes.m_necessary[e % boxes.m_necessary.size()];
          const RayExpression& expr = exprs[e];
          RayAnalysis ra = ray_leading(expr, ray);
          if (ra.decided && ra.diverges)
            return found(ray, {{"C", to_string(C)}, {"m", to_string(m)}, {"exponent", to_string(ra.leading_exponent)}},
                         "ray_divergence_critical");
        }
    return unknown("normalizability", F);
  }
  for (const auto& qc : boxes.q_necessary) {
    QMap q = constant_q(F, qc);
    RayExpression expr;
    expr.F = F;
    expr.penalties = penalties_for(F, q, Rational(1));
    for (const auto& ray : rays) {
      auto margin = ray_growth_margin(F, params, q, ray, 1);
      if (!margin || !(*margin > params.d)) continue;
      for (const auto& m : boxes.m_necessary) {
        expr.mass = m;
        RayAnalysis ra = ray_leading(expr, ray);
        if (ra.decided && ra.diverges)
          return found(ray,
                       {{"q", q_string(q)}, {"m", to_string(m)}, {"margin", to_string(*margin)},
                        {"exponent", to_string(ra.leading_exponent)}},
                       "ray_divergence_subcritical");
      }
    }
  }
  return unknown("normalizability", F);
}

Verdict classify_normalizability(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes) {
  Verdict suff = check_normalizable(F, params, boxes);
  Verdict nec = check_non_normalizable(F, params, boxes);
  if (suff.status == Status::Normalizable && nec.status == Status::NonNormalizable)
    throw InconsistencyError("both normalizability and non-normalizability certified for " + F.to_string());
  if (suff.status == Status::Normalizable) return suff;
  return nec;
}

Verdict check_grand_canonical(const Polynomial& F, const ModelParams& params, const SearchBoxes& boxes) {
  check_regime(F, params);
  const auto& rays = rays_for(F.nvars(), boxes);
  const bool crit = params.critical();
  const Rational ceiling = crit ? Rational(4) : taming_ceiling(params);

  std::optional<Verdict> suff;
  for (const auto& off : boxes.kappa_offsets) {
    const Rational kappa = ceiling - off;
    if (kappa <= 0 || suff) continue;
    std::vector<QMap> qs;
    if (crit) {
      for (const auto& c : boxes.q_sufficient)
        if (c > 1) qs.push_back(constant_q(F, c));
    } else {
      qs = sufficient_q_candidates(F, params, boxes, kappa);
    }
    for (const auto& q : qs) {
      BoundMode mode;
      mode.power = true;
      mode.kappa = kappa;
      BoundResult br = check_bounded(F, q, mode, false);
      if (br.status != BoundStatus::BoundedCertified) continue;
      Verdict v;
      v.claim = "taming";
      v.status = Status::Normalizable;
      v.theorem = crit ? "taming_bound_critical" : "taming_bound_subcritical";
      v.evidence = {{"q", q_string(q)}, {"kappa", to_string(kappa)}, {"certificate", br.certificate}};
      suff = v;
      break;
    }
  }

  std::optional<Verdict> nec;
  auto try_ray = [&](const QMap& q, const RayExpression& expr, const Rational& weight, const Ray& ray) -> bool {
    std::optional<Rational> margin;
    if (!crit) {
      margin = ray_growth_margin(F, params, q, ray, 2);
      if (!margin || !(*margin > params.d)) return false;
    }
    RayAnalysis ra = ray_leading(expr, ray);
    if (!ra.decided || !ra.diverges) return false;
    const Rational bar = ceiling * ray_top(ray);
    if (crit ? !(ra.leading_exponent >= bar) : !(ra.leading_exponent > bar)) return false;
    Verdict v;
    v.claim = "taming";
    v.status = Status::NonNormalizable;
    v.theorem = crit ? "taming_ray_critical" : "taming_ray_subcritical";
    v.witness = ray;
    v.evidence = {{"ray", to_string(ray)}, {"exponent", to_string(ra.leading_exponent)}, {"ceiling", to_string(bar)}};
    if (crit)
      v.evidence.push_back({"C", to_string(weight)});
    else
      v.evidence.push_back({"q", q_string(q)}), v.evidence.push_back({"margin", to_string(*margin)});
    nec = v;
    return true;
  };
  auto expression = [&](const QMap& q, const Rational& weight) {
    RayExpression expr;
    expr.F = F;
    expr.penalties = penalties_for(F, q, weight);
    return expr;
  };
  if (crit) {
    const QMap one = constant_q(F, Rational(1));
    std::vector<RayExpression> exprs;
    for (const auto& C : boxes.C_grid) exprs.push_back(expression(one, C));
    for (const auto& ray : rays) {
      bool hit = false;
      for (std::size_t e = 0; e < exprs.size() && !hit; ++e) hit = try_ray(one, exprs[e], boxes.C_grid[e], ray);
      if (hit) break;
    }
  } else {
    for (const auto& qc : boxes.q_necessary) {
      QMap q = constant_q(F, qc);
      RayExpression expr = expression(q, Rational(1));
      bool hit = false;
      for (const auto& ray : rays)
        if ((hit = try_ray(q, expr, Rational(1), ray))) break;
      if (hit) break;
    }
  }

  if (suff && nec) throw InconsistencyError("both taming normalizability and non-normalizability certified for " +
                                            F.to_string());
  if (suff) return *suff;
  if (nec) return *nec;

  if (!crit) {
    for (const auto& q : sufficient_q_candidates(F, params, boxes, ceiling)) {
      BoundMode mode;
      mode.power = true;
      mode.kappa = ceiling;
      BoundResult br = check_bounded(F, q, mode, false);
      if (br.status != BoundStatus::BoundedCertified) continue;
      Verdict v;
      v.claim = "taming";
      v.status = Status::CriticalTag;
      v.theorem = "taming_endpoint";
      v.evidence = {{"q", q_string(q)}, {"kappa", to_string(ceiling)}, {"certificate", br.certificate}};
      v.notes.push_back("domination holds only at the endpoint exponent 2d/(d-alpha); neither criterion applies");
      return v;
    }
  }
  return unknown("taming", F);
}

}  // namespace gibbs
