#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <cmath>

namespace gibbs {

double hermite(int l, double x, double sigma) {
  if (l < 0) throw ConfigError("negative Hermite degree");
  double prev = 1, cur = x;
  if (l == 0) return prev;
  for (int k = 1; k < l; ++k) {
    const double next = x * cur - k * sigma * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_table(int K, double x, double sigma, double* out) {
  out[0] = 1;
  if (K >= 1) out[1] = x;
  for (int k = 1; k < K; ++k) out[k + 1] = x * out[k] - k * sigma * out[k - 1];
}

double hermite_multi(const MultiIndex& beta, const std::vector<double>& x, double sigma) {
  double v = 1;
  for (std::size_t i = 0; i < beta.size(); ++i) v *= hermite(beta[i], x[i], sigma);
  return v;
}

double hermite_addition(const MultiIndex& a, const std::vector<double>& x, const std::vector<double>& y, double c) {
  double total = 0;
  for (const auto& b : box_below(a)) {
    double term = binomial(a, b) * hermite_multi(b, x, c);
    for (std::size_t i = 0; i < a.size(); ++i) term *= std::pow(y[i], a[i] - b[i]);
    total += term;
  }
  return total;
}

double sigma_alpha_N(int d, double alpha, int N) {
  if (N < 0) throw ConfigError("non-positive cutoff");
  if (d < 1 || d > 3) throw ConfigError("dimension d must be 1, 2 or 3");
  // Neumaier sum, smallest terms first.
  double sum = 0, comp = 0;
  auto add = [&](double term) {
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  };
  if (d == 1) {
    for (long long l = N; l >= 1; --l) add(2 * std::pow(1.0 + static_cast<double>(l) * l, -alpha));
    add(1);
    return sum + comp;
  }
  // Multiplicity of each |l|^2.
  const long long N2 = static_cast<long long>(N) * N;
  std::vector<long long> count(static_cast<std::size_t>(N2) + 1, 0);
  for (long long a = -N; a <= N; ++a) {
    const long long ra = a * a;
    if (d == 2) {
      for (long long b = -N; b <= N; ++b)
        if (ra + b * b <= N2) ++count[static_cast<std::size_t>(ra + b * b)];
    } else {
      for (long long b = -N; b <= N; ++b) {
        const long long rb = ra + b * b;
        if (rb > N2) continue;
        const long long cmax = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(N2 - rb)) + 1e-9));
        for (long long c = -cmax; c <= cmax; ++c)
          if (rb + c * c <= N2) ++count[static_cast<std::size_t>(rb + c * c)];
      }
    }
  }
  for (long long r = N2; r >= 0; --r)
    if (count[static_cast<std::size_t>(r)] != 0)
      add(static_cast<double>(count[static_cast<std::size_t>(r)]) * std::pow(1.0 + r, -alpha));
  return sum + comp;
}

int wick_grid_size(int k, int N) { return fft_size_at_least(2 * std::max(k, 1) * N + 1); }

}  // namespace gibbs
