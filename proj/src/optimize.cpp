#include "gibbs/drift.hpp"

#include "gibbs/errors.hpp"

namespace gibbs {

ShiftDrift parametric_drift(const ModelParams& params, const std::vector<double>& v, const std::vector<double>& s,
                            const BumpProfile* bump) {
  if (static_cast<int>(v.size()) != params.n) throw ConfigError("shift vector has the wrong length");
  ShiftDrift drift;
  drift.shift = SpectralField::zeros(params.d, params.n, bump ? bump->M : 0);
  const ModeSet& ms = *drift.shift.modes;
  std::vector<int> z(params.d, 0);
  const int zi = ms.index_of(z.data());
  for (int i = 0; i < params.n; ++i) drift.shift.coef[i][zi] += v[i];
  if (bump) {
    if (static_cast<int>(s.size()) != params.n) throw ConfigError("bump multiples have the wrong length");
    const ModeSet& bm = *bump->field.modes;
    for (int k = 0; k < bm.size(); ++k) {
      const int j = ms.index_of(bm.mode(k));
      for (int i = 0; i < params.n; ++i) drift.shift.coef[i][j] += s[i] * bump->field.coef[0][k];
    }
  }
  return drift;
}

OptimizeResult optimize_parametric(const Polynomial& F, const ModelParams& params, const OptimizeConfig& cfg) {
  // constant F is accepted
  if (!F.support().empty())
    check_regime(F, params);
  else if (params.n != F.nvars() || params.d < 1)
    throw ConfigError("model shape does not match the polynomial");
  if (cfg.max_evaluations < 1) throw ConfigError("optimizer needs a positive evaluation budget");
  if (!(cfg.initial_step > 0 && cfg.min_step > 0)) throw ConfigError("optimizer steps must be positive");
  if (cfg.use_bump && cfg.M > cfg.N) throw ConfigError("bump cutoff M must not exceed N");
  std::optional<BumpProfile> bump;
  if (cfg.use_bump) bump = build_bump(BumpShape{}, params.d, cfg.M, cfg.profile_r);
  const int n = params.n;
  const int dim = cfg.use_bump ? 2 * n : n;

  OptimizeResult out;
  auto evaluate = [&](const std::vector<double>& x) {
    std::vector<double> v(x.begin(), x.begin() + n), s;
    if (cfg.use_bump) s.assign(x.begin() + n, x.end());
    ++out.evaluations;
    return bd_objective(F, params, parametric_drift(params, v, s, bump ? &*bump : nullptr), cfg.N, cfg.mc);
  };

  std::vector<double> x(dim, 0.0);
  out.zero = evaluate(x);
  out.best = out.zero;
  double step = cfg.initial_step;
  while (step >= cfg.min_step && out.evaluations < cfg.max_evaluations) {
    bool improved = false;
    for (int k = 0; k < dim && !improved && out.evaluations < cfg.max_evaluations; ++k)
      for (double sign : {1.0, -1.0}) {
        if (out.evaluations >= cfg.max_evaluations) break;
        std::vector<double> y = x;
        y[k] += sign * step;
        ObjectiveEstimate e = evaluate(y);
        if (e.mean < out.best.mean) {
          x = y;
          out.best = e;
          improved = true;
          break;
        }
      }
    if (!improved) step /= 2;
  }
  out.v.assign(x.begin(), x.begin() + n);
  if (cfg.use_bump) out.s.assign(x.begin() + n, x.end());
  out.drift = parametric_drift(params, out.v, out.s, bump ? &*bump : nullptr);
  return out;
}

}  // namespace gibbs
