#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <cmath>

namespace gibbs {

namespace {

struct TermPlan {
  MultiIndex beta;
  double coef;
};

}  // namespace

WickReport wick_interaction(const Polynomial& F, const ModelParams& params, const SpectralField& field, int grid) {
  if (field.n != F.nvars()) throw ConfigError("field has " + std::to_string(field.n) + " components, F has " +
                                              std::to_string(F.nvars()) + " variables");
  if (field.d() != params.d) throw ConfigError("field dimension does not match d");
  const int N = field.N();
  const int k = std::max(F.degree(), 1);
  const int G = grid > 0 ? grid : wick_grid_size(k, N);
  if (G < 2 * k * N + 1) throw ConfigError("grid must have at least 2kN+1 points per axis");

  WickReport rep;
  rep.sigma = sigma_alpha_N(params.d, params.alpha_d(), N);
  rep.grid = G;
  rep.wick_l2 = wick_l2(field, rep.sigma);

  std::vector<TermPlan> plan;
  std::vector<int> maxdeg(field.n, 0);
  for (const auto& [b, c] : F.terms()) {
    plan.push_back({b, to_double(c)});
    for (int i = 0; i < field.n; ++i) maxdeg[i] = std::max(maxdeg[i], b[i]);
  }
  std::vector<std::vector<double>> phi(field.n);
  for (int i = 0; i < field.n; ++i) phi[i] = synthesize(field, i, G);
  const std::size_t npts = phi[0].size();

  std::vector<std::vector<double>> table(field.n);
  for (int i = 0; i < field.n; ++i) table[i].resize(maxdeg[i] + 1);
  std::vector<double> sums(plan.size(), 0.0);
  for (std::size_t x = 0; x < npts; ++x) {
    for (int i = 0; i < field.n; ++i) hermite_table(maxdeg[i], phi[i][x], rep.sigma, table[i].data());
    for (std::size_t t = 0; t < plan.size(); ++t) {
      double v = 1;
      for (int i = 0; i < field.n; ++i) v *= table[i][plan[t].beta[i]];
      sums[t] += v;
    }
  }
  for (std::size_t t = 0; t < plan.size(); ++t) {
    const double contrib = plan[t].coef * sums[t] / static_cast<double>(npts);
    rep.terms.emplace_back(plan[t].beta, contrib);
    rep.value += contrib;
  }
  return rep;
}

double wick_l2(const SpectralField& field, double sigma) {
  double total = 0;
  for (int i = 0; i < field.n; ++i) {
    double s = 0;
    for (const auto& z : field.coef[i]) s += std::norm(z);
    total += s - sigma;
  }
  return total;
}

std::vector<double> wick_power_grid(const SpectralField& field, const MultiIndex& gamma, double sigma, int G) {
  if (static_cast<int>(gamma.size()) != field.n) throw ConfigError("gamma length does not match n");
  std::vector<double> out;
  std::vector<double> table;
  for (int i = 0; i < field.n; ++i) {
    if (gamma[i] == 0) continue;
    auto phi = synthesize(field, i, G);
    if (out.empty()) out.assign(phi.size(), 1.0);
    table.resize(gamma[i] + 1);
    for (std::size_t x = 0; x < phi.size(); ++x) {
      hermite_table(gamma[i], phi[x], sigma, table.data());
      out[x] *= table[gamma[i]];
    }
  }
  if (out.empty()) {
    std::size_t size = 1;
    for (int j = 0; j < field.d(); ++j) size *= static_cast<std::size_t>(G);
    out.assign(size, 1.0);
  }
  return out;
}

}  // namespace gibbs
