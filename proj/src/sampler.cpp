#include "gibbs/errors.hpp"
#include "gibbs/field.hpp"
#include "gibbs/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace gibbs {

namespace {

enum Segment : std::uint64_t { kFull = 0, kUntilEta = 1, kIncrement = 2 };

std::uint64_t mode_key(std::uint64_t seed, std::uint64_t replica, int component, std::uint64_t segment, const int* l,
                       int d) {
  std::uint64_t packed = 0;
  for (int j = 0; j < d; ++j) packed = packed * 1000003ull + static_cast<std::uint64_t>(l[j] + 500000);
  return mix_key({seed, replica, static_cast<std::uint64_t>(component), segment, packed});
}

// Complex Gaussian with E|z|^2 = var for l != 0 (split evenly between real
// and imaginary parts), real N(0, var) for l = 0.
Complex mode_normal(const ModeSet& ms, int i, double var, std::uint64_t seed, std::uint64_t replica, int c,
                    std::uint64_t segment) {
  auto [g1, g2] = gaussian_pair(mode_key(seed, replica, c, segment, ms.mode(i), ms.d()));
  if (ms.norm2(i) == 0) return Complex(std::sqrt(var) * g1, 0);
  const double s = std::sqrt(var / 2);
  return Complex(s * g1, s * g2);
}

void check_model(const ModelParams& params) {
  if (params.n < 1) throw ConfigError("n must be positive");
  if (params.alpha <= 0) throw ConfigError("alpha must be positive");
}

}  // namespace

SpectralField sample_field(const ModelParams& params, int N, std::uint64_t seed, std::uint64_t replica) {
  check_model(params);
  if (N < 1) throw ConfigError("non-positive cutoff");
  SpectralField f = SpectralField::zeros(params.d, params.n, N);
  const ModeSet& ms = *f.modes;
  const double a = params.alpha_d();
  for (int c = 0; c < params.n; ++c)
    for (int i = 0; i < ms.size(); ++i) {
      if (ms.norm2(i) != 0 && !ms.is_positive(i)) continue;
      const Complex z = mode_normal(ms, i, bracket(ms.norm2(i), -a), seed, replica, c, kFull);
      f.coef[c][i] = z;
      f.coef[c][ms.negated(i)] = std::conj(z);
    }
  return f;
}

CoupledSample sample_coupled(const ModelParams& params, int N, int M, double eta, std::uint64_t seed,
                             std::uint64_t replica) {
  check_model(params);
  if (N < 1 || M < 1) throw ConfigError("non-positive cutoff");
  if (!(eta > 0 && eta < 1)) throw ConfigError("eta must lie in (0, 1)");
  CoupledSample out;
  out.eta = eta;
  out.Y = SpectralField::zeros(params.d, params.n, N);
  out.Y_eta = SpectralField::zeros(params.d, params.n, M);
  const int top = std::max(N, M);
  const ModeSet& ms = *ModeSet::get(params.d, top);
  const double a = params.alpha_d();
  for (int c = 0; c < params.n; ++c)
    for (int i = 0; i < ms.size(); ++i) {
      if (ms.norm2(i) != 0 && !ms.is_positive(i)) continue;
      const double scale = bracket(ms.norm2(i), -a / 2);
      const Complex w_eta = scale * mode_normal(ms, i, eta, seed, replica, c, kUntilEta);
      const Complex incr = scale * mode_normal(ms, i, 1 - eta, seed, replica, c, kIncrement);
      const int* l = ms.mode(i);
      std::vector<int> neg(l, l + ms.d());
      for (int& v : neg) v = -v;
      if (int j = out.Y.modes->index_of(l); j >= 0) {
        out.Y.coef[c][j] = w_eta + incr;
        out.Y.coef[c][out.Y.modes->index_of(neg.data())] = std::conj(w_eta + incr);
      }
      if (int j = out.Y_eta.modes->index_of(l); j >= 0) {
        out.Y_eta.coef[c][j] = w_eta;
        out.Y_eta.coef[c][out.Y_eta.modes->index_of(neg.data())] = std::conj(w_eta);
      }
    }
  return out;
}

double sobolev_norm(const SpectralField& f, double s, double p) {
  const ModeSet& ms = *f.modes;
  if (p == 2) {
    double total = 0;
    for (int c = 0; c < f.n; ++c)
      for (int i = 0; i < ms.size(); ++i) total += bracket(ms.norm2(i), s) * std::norm(f.coef[c][i]);
    return std::sqrt(total);
  }
  if (!std::isinf(p)) throw ConfigError("sobolev_norm supports p = 2 and p = inf");
  SpectralField g = f;
  for (int c = 0; c < f.n; ++c)
    for (int i = 0; i < ms.size(); ++i) g.coef[c][i] *= bracket(ms.norm2(i), s / 2);
  const int G = fft_size_at_least(4 * ms.N() + 1);
  double sup = 0;
  std::vector<double> mag;
  for (int c = 0; c < f.n; ++c) {
    auto v = synthesize(g, c, G);
    if (mag.empty()) mag.assign(v.size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) mag[k] += v[k] * v[k];
  }
  for (double m : mag) sup = std::max(sup, std::sqrt(m));
  return sup;
}

namespace {

constexpr char kMagic[8] = {'G', 'F', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ConfigError("truncated field file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

void write_field(std::ostream& out, const SpectralField& f, std::uint64_t seed) {
  out.write(kMagic, 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.d()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.N()));
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, seed);
  for (int c = 0; c < f.n; ++c)
    for (const auto& z : f.coef[c]) {
      put<double>(out, z.real());
      put<double>(out, z.imag());
    }
}

SpectralField read_field(std::istream& in, std::uint64_t* seed) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not a field dump");
  const int d = static_cast<int>(get<std::uint32_t>(in));
  const int n = static_cast<int>(get<std::uint32_t>(in));
  const int N = static_cast<int>(get<std::uint32_t>(in));
  get<std::uint32_t>(in);
  const auto s = get<std::uint64_t>(in);
  if (seed) *seed = s;
  if (n < 1 || n > 64 || N < 0 || N > 1 << 16) throw ConfigError("implausible field header");
  SpectralField f = SpectralField::zeros(d, n, N);
  for (int c = 0; c < n; ++c)
    for (auto& z : f.coef[c]) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      z = Complex(re, im);
    }
  return f;
}

}  // namespace gibbs
