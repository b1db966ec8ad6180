#include "gibbs/estimator.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/wick.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs {

MeanSe batch_means(const std::vector<double>& x, int batches) {
  MeanSe out;
  const std::size_t n = x.size();
  if (n == 0) return out;
  double total = 0;
  for (double v : x) total += v;
  out.mean = total / static_cast<double>(n);
  if (n < 2) return out;
  const std::size_t B = std::min<std::size_t>(static_cast<std::size_t>(std::max(batches, 2)), n);
  std::vector<double> means(B, 0.0);
  // Contiguous batches with sizes differing by at most one.
  std::size_t start = 0;
  for (std::size_t b = 0; b < B; ++b) {
    const std::size_t len = n / B + (b < n % B ? 1 : 0);
    for (std::size_t i = start; i < start + len; ++i) means[b] += x[i];
    means[b] /= static_cast<double>(len);
    start += len;
  }
  double mb = 0;
  for (double m : means) mb += m;
  mb /= static_cast<double>(B);
  double var = 0;
  for (double m : means) var += (m - mb) * (m - mb);
  var /= static_cast<double>(B - 1);
  out.se = std::sqrt(var / static_cast<double>(B));
  return out;
}

namespace {

void check_config(const EstimatorConfig& cfg) {
  if (cfg.samples < 2) throw ConfigError("samples must be at least 2");
  if (!std::isfinite(cfg.L)) throw ConfigError("truncation level L must be finite");
  if (cfg.taming && !(cfg.taming->K >= 0 && cfg.taming->b > 0)) throw ConfigError("taming needs K >= 0 and b > 0");
  for (int N : cfg.cutoffs)
    if (N < 1) throw ConfigError("non-positive cutoff");
}

}  // namespace

std::vector<EstimateRow> estimate_log_z(const Polynomial& F, const ModelParams& params, const EstimatorConfig& cfg) {
  check_config(cfg);
  if (cfg.cutoffs.empty()) throw ConfigError("empty cutoff schedule");
  std::vector<EstimateRow> rows;
  for (int N : cfg.cutoffs) {
    std::vector<double> weight(cfg.samples), R(cfg.samples);
    parallel_for(cfg.samples, cfg.threads, [&](int j) {
      SpectralField phi = sample_field(params, N, cfg.seed, static_cast<std::uint64_t>(j));
      WickReport rep = wick_interaction(F, params, phi);
      R[j] = rep.value;
      double logw = std::min(rep.value, cfg.L);
      if (cfg.taming) logw -= cfg.taming->K * std::pow(std::abs(rep.wick_l2), cfg.taming->b);
      weight[j] = std::exp(logw);
    });
    EstimateRow row;
    row.N = N;
    row.samples = cfg.samples;
    row.seed = cfg.seed;
    MeanSe ms = batch_means(weight, cfg.batches);
    row.mean = ms.mean;
    row.se = ms.se;
    row.max_R = *std::max_element(R.begin(), R.end());
    row.truncation_hits = static_cast<int>(std::count_if(R.begin(), R.end(), [&](double r) { return r >= cfg.L; }));
    rows.push_back(row);
  }
  return rows;
}

namespace {

double weighted_norm2(const SpectralField& f, double alpha, int N) {
  const ModeSet& ms = *f.modes;
  double total = 0;
  for (int c = 0; c < f.n; ++c)
    for (int i = 0; i < ms.size(); ++i)
      if (ms.norm2(i) <= N * N) total += bracket(ms.norm2(i), alpha) * std::norm(f.coef[c][i]);
  return total;
}

}  // namespace

double kinetic_pathwise(const ShiftDrift& drift, const SpectralField* Y_eta, double alpha, int N) {
  double total = weighted_norm2(drift.shift, alpha, N);
  if (drift.cancel_noise) {
    if (!Y_eta) throw ConfigError("kinetic_pathwise needs Y_M(eta) for a noise-cancelling drift");
    const ModeSet& ms = *Y_eta->modes;
    double cross = 0;
    for (int c = 0; c < Y_eta->n; ++c)
      for (int i = 0; i < ms.size(); ++i) {
        if (ms.norm2(i) > N * N) continue;
        const int j = drift.shift.modes->index_of(ms.mode(i));
        if (j < 0) continue;
        cross += bracket(ms.norm2(i), alpha) * (drift.shift.coef[c][j] * std::conj(Y_eta->coef[c][i])).real();
      }
    total += -2 * cross + weighted_norm2(*Y_eta, alpha, N) / (1 - drift.eta);
  }
  return 0.5 * total;
}

double kinetic_expected(const ShiftDrift& drift, double alpha, int N) {
  double total = weighted_norm2(drift.shift, alpha, N);
  if (drift.cancel_noise) {
    const int modes = ModeSet::get(drift.shift.d(), std::min(drift.M, N))->size();
    total += drift.shift.n * drift.eta * modes / (1 - drift.eta);
  }
  return 0.5 * total;
}

ObjectiveEstimate bd_objective(const Polynomial& F, const ModelParams& params, const ShiftDrift& drift, int N,
                               const EstimatorConfig& cfg) {
  check_config(cfg);
  if (N < 1) throw ConfigError("non-positive cutoff");
  if (drift.shift.n != params.n || drift.shift.d() != params.d) throw ConfigError("drift shape mismatch");
  if (drift.cancel_noise && (drift.M < 1 || drift.M > N)) throw ConfigError("drift cutoff M must satisfy 1 <= M <= N");
  if (drift.shift.hermitian_defect() > 1e-10) throw ConfigError("drift shift is not a real field");
  const double alpha = params.alpha_d();
  const SpectralField shift_N = drift.shift.with_cutoff(N);

  std::vector<double> total(cfg.samples), inter(cfg.samples), kin(cfg.samples), tame(cfg.samples);
  std::vector<char> hit(cfg.samples, 0);
  parallel_for(cfg.samples, cfg.threads, [&](int j) {
    SpectralField phi = shift_N;
    double k;
    if (drift.cancel_noise) {
      CoupledSample cs = sample_coupled(params, N, drift.M, drift.eta, cfg.seed, static_cast<std::uint64_t>(j));
      phi.add(cs.Y);
      phi.add(cs.Y_eta, -1.0);
      k = kinetic_pathwise(drift, &cs.Y_eta, alpha, N);
    } else {
      phi.add(sample_field(params, N, cfg.seed, static_cast<std::uint64_t>(j)));
      k = kinetic_pathwise(drift, nullptr, alpha, N);
    }
    WickReport rep = wick_interaction(F, params, phi);
    hit[j] = rep.value >= cfg.L;
    inter[j] = -std::min(rep.value, cfg.L);
    tame[j] = cfg.taming ? cfg.taming->K * std::pow(std::abs(rep.wick_l2), cfg.taming->b) : 0.0;
    kin[j] = k;
    total[j] = inter[j] + tame[j] + kin[j];
  });
  ObjectiveEstimate out;
  out.N = N;
  out.M = drift.M;
  out.samples = cfg.samples;
  MeanSe ms = batch_means(total, cfg.batches);
  out.mean = ms.mean;
  out.se = ms.se;
  out.interaction_mean = batch_means(inter, cfg.batches).mean;
  out.kinetic_mean = batch_means(kin, cfg.batches).mean;
  out.taming_mean = batch_means(tame, cfg.batches).mean;
  out.kinetic_expected = kinetic_expected(drift, alpha, N);
  out.truncation_hits = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
  return out;
}

double wick_variance_oracle(const ModelParams& params, const MultiIndex& gamma, int N) {
  const int k = degree(gamma);
  if (k == 0) return 0.0;
  if (N < 1) throw ConfigError("non-positive cutoff");
  const ModeSet& ms = *ModeSet::get(params.d, N);
  const double size = std::pow(static_cast<double>(ms.size()), k - 1);
  if (size > 5e7) throw ConfigError("variance oracle limited to about 5e7 mode tuples");
  const double a = params.alpha_d();
  std::vector<double> w(ms.size());
  for (int i = 0; i < ms.size(); ++i) w[i] = bracket(ms.norm2(i), -a);
  const int d = params.d;
  double total = 0;
  std::vector<int> idx(k - 1, 0);
  std::vector<int> last(d);
  while (true) {
    double prod = 1;
    std::fill(last.begin(), last.end(), 0);
    for (int t = 0; t < k - 1; ++t) {
      prod *= w[idx[t]];
      for (int j = 0; j < d; ++j) last[j] -= ms.mode(idx[t])[j];
    }
    const int li = ms.index_of(last.data());
    if (li >= 0) total += prod * w[li];
    int t = k - 2;
    while (t >= 0 && idx[t] == ms.size() - 1) idx[t--] = 0;
    if (t < 0) break;
    ++idx[t];
  }
  return factorial(gamma) * total;
}

}  // namespace gibbs
