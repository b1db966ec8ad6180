#include "gibbs/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace gibbs {

int degree(const MultiIndex& b) { return std::accumulate(b.begin(), b.end(), 0); }

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool less(const MultiIndex& a, const MultiIndex& b) { return a != b && leq(a, b); }

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

MultiIndex unit_index(int n, int j) {
  MultiIndex e(n, 0);
  e[j] = 1;
  return e;
}

bool is_even(const MultiIndex& b) {
  for (int v : b)
    if (v % 2 != 0) return false;
  return true;
}

double factorial(const MultiIndex& b) {
  double f = 1;
  for (int v : b)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

Rational binomial_exact(const MultiIndex& a, const MultiIndex& b) {
  Rational out = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < b[i]; ++k) out = out * Rational(a[i] - k, k + 1);
  return out;
}

double binomial(const MultiIndex& a, const MultiIndex& b) { return to_double(binomial_exact(a, b)); }

Rational dot(const MultiIndex& b, const std::vector<int>& r) {
  long long s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) s += static_cast<long long>(b[i]) * r[i];
  return Rational(s);
}

std::string to_string(const MultiIndex& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s + ")";
}

std::vector<MultiIndex> box_below(const MultiIndex& beta) {
  std::vector<MultiIndex> out;
  MultiIndex cur(beta.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = beta.size();
    while (i > 0) {
      --i;
      if (cur[i] < beta[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < beta.size(); ++j) cur[j] = 0;
        break;
      }
      if (i == 0) return out;
    }
    if (beta.empty()) return out;
  }
}

}  // namespace gibbs
