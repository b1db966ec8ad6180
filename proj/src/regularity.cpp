#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs {

double regularity_proxy(const SpectralField& field, const MultiIndex& gamma, double sigma, double s) {
  const int d = field.d();
  const int G = wick_grid_size(degree(gamma), field.N());
  auto values = wick_power_grid(field, gamma, sigma, G);
  auto c = analyze(values, d, G);
  std::vector<int> idx(d, 0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    int r2 = 0;
    std::size_t rem = k;
    for (int j = d - 1; j >= 0; --j) {
      int m = static_cast<int>(rem % G);
      rem /= G;
      if (m > G / 2) m -= G;
      r2 += m * m;
    }
    c[k] *= bracket(r2, s / 2);
  }
  auto smooth = synthesize_raw(c, d, G);
  double sup = 0;
  for (double v : smooth) sup = std::max(sup, std::abs(v));
  return sup;
}

std::vector<RegularityPoint> regularity_scan(const ModelParams& params, const MultiIndex& gamma,
                                             const std::vector<int>& cutoffs, double eps, int samples,
                                             std::uint64_t seed) {
  if (samples < 1) throw ConfigError("samples must be positive");
  const double s = (params.alpha_d() - params.d / 2.0) * degree(gamma) - eps;
  std::vector<RegularityPoint> out;
  for (int N : cutoffs) {
    RegularityPoint pt;
    pt.N = N;
    const double sigma = sigma_alpha_N(params.d, params.alpha_d(), N);
    for (int j = 0; j < samples; ++j)
      pt.values.push_back(regularity_proxy(sample_field(params, N, seed, j), gamma, sigma, s));
    auto v = pt.values;
    std::sort(v.begin(), v.end());
    pt.median = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace gibbs
