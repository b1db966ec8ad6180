#include "gibbs/errors.hpp"
#include "gibbs/field.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace gibbs {

ModeSet::ModeSet(int d, int N) : d_(d), N_(N) {
  if (d < 1 || d > 3) throw ConfigError("dimension d must be 1, 2 or 3");
  if (N < 0) throw ConfigError("non-positive cutoff");
  const int side = 2 * N + 1;
  std::size_t box = 1;
  for (int i = 0; i < d; ++i) box *= side;
  box_.assign(box, -1);
  std::vector<int> l(d, -N);
  for (std::size_t flat = 0; flat < box; ++flat) {
    int r2 = 0;
    for (int v : l) r2 += v * v;
    if (r2 <= N * N) {
      box_[flat] = static_cast<int>(norm2_.size());
      coords_.insert(coords_.end(), l.begin(), l.end());
      norm2_.push_back(r2);
    }
    for (int j = d - 1; j >= 0; --j) {
      if (++l[j] <= N) break;
      l[j] = -N;
    }
  }
  neg_.resize(norm2_.size());
  std::vector<int> m(d);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < d; ++j) m[j] = -mode(i)[j];
    neg_[i] = index_of(m.data());
  }
}

std::shared_ptr<const ModeSet> ModeSet::get(int d, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, N}];
  if (!slot) slot = std::make_shared<ModeSet>(d, N);
  return slot;
}

int ModeSet::index_of(const int* l) const {
  std::size_t flat = 0;
  for (int j = 0; j < d_; ++j) {
    if (l[j] < -N_ || l[j] > N_) return -1;
    flat = flat * (2 * N_ + 1) + static_cast<std::size_t>(l[j] + N_);
  }
  return box_[flat];
}

bool ModeSet::is_positive(int i) const {
  for (int j = 0; j < d_; ++j) {
    if (mode(i)[j] > 0) return true;
    if (mode(i)[j] < 0) return false;
  }
  return false;
}

double bracket(int norm2, double power) { return std::pow(1.0 + norm2, power); }

SpectralField SpectralField::zeros(int d, int n, int N) {
  SpectralField f;
  f.modes = ModeSet::get(d, N);
  f.n = n;
  f.coef.assign(n, std::vector<Complex>(f.modes->size(), Complex(0, 0)));
  return f;
}

SpectralField SpectralField::with_cutoff(int N) const {
  SpectralField out = zeros(d(), n, N);
  out.add(*this);
  return out;
}

void SpectralField::add(const SpectralField& other, double scale) {
  if (other.n != n || other.d() != d()) throw ConfigError("field shape mismatch");
  const ModeSet& src = *other.modes;
  for (int i = 0; i < src.size(); ++i) {
    const int j = modes->index_of(src.mode(i));
    if (j < 0) continue;
    for (int c = 0; c < n; ++c) coef[c][j] += scale * other.coef[c][i];
  }
}

double SpectralField::hermitian_defect() const {
  double defect = 0, scale = 0;
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < modes->size(); ++i) {
      defect = std::max(defect, std::abs(coef[c][modes->negated(i)] - std::conj(coef[c][i])));
      scale = std::max(scale, std::abs(coef[c][i]));
    }
  return scale > 0 ? defect / scale : 0.0;
}

}  // namespace gibbs
