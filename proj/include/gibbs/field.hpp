#pragma once

#include "gibbs/polynomial.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace gibbs {

using Complex = std::complex<double>;

// Lattice points l in Z^d with |l| <= N (Euclidean ball), in lexicographic
// order of (l_1, ..., l_d).
class ModeSet {
 public:
  ModeSet(int d, int N);
  static std::shared_ptr<const ModeSet> get(int d, int N);

  int d() const { return d_; }
  int N() const { return N_; }
  int size() const { return static_cast<int>(norm2_.size()); }
  const int* mode(int i) const { return &coords_[static_cast<std::size_t>(i) * d_]; }
  int norm2(int i) const { return norm2_[i]; }
  int negated(int i) const { return neg_[i]; }
  // Index of l in this set, or -1.
  int index_of(const int* l) const;
  // True for the representative of {l, -l}: first nonzero coordinate > 0.
  bool is_positive(int i) const;

 private:
  int d_, N_;
  std::vector<int> coords_;
  std::vector<int> norm2_;
  std::vector<int> neg_;
  std::vector<int> box_;  // (2N+1)^d lookup into the mode list
};

// Fourier coefficients of an R^n-valued field on the unit torus T^d,
// phi(x) = sum_l phi^(l) e^{2 pi i l.x}, truncated to |l| <= N.
struct SpectralField {
  std::shared_ptr<const ModeSet> modes;
  int n = 1;
  std::vector<std::vector<Complex>> coef;  // [component][mode index]

  static SpectralField zeros(int d, int n, int N);
  int d() const { return modes->d(); }
  int N() const { return modes->N(); }
  // Re-expressed on cutoff N: drops modes beyond it, pads with zeros.
  SpectralField with_cutoff(int N) const;
  // this += scale * other, on this field's modes.
  void add(const SpectralField& other, double scale = 1.0);
  double hermitian_defect() const;
};

// Gaussian free field with mode variance (1+|l|^2)^{-alpha}: l != 0 modes get
// half the variance on the real and half on the imaginary part, -l is the
// conjugate, the zero mode is real. The normals for a mode depend only on
// (seed, replica, component, l, segment), never on N, so fields with
// different cutoffs drawn from the same seed are nested projections.
SpectralField sample_field(const ModelParams& params, int N, std::uint64_t seed, std::uint64_t replica = 0);

// Y_N(1) and Y_M(eta) from one Brownian path: W(1) = W(eta) + an
// independent increment of variance 1 - eta. Corr of matching modes is
// sqrt(eta).
struct CoupledSample {
  SpectralField Y;      // cutoff N, time 1
  SpectralField Y_eta;  // cutoff M, time eta
  double eta = 0;
};
CoupledSample sample_coupled(const ModelParams& params, int N, int M, double eta, std::uint64_t seed,
                             std::uint64_t replica = 0);

// H^s (p = 2): (sum_l (1+|l|^2)^s |f^(l)|^2)^{1/2}, summed over components.
// W^{s,inf} (p = inf): grid sup of |<grad>^s f| on an oversampled grid.
double sobolev_norm(const SpectralField& f, double s, double p);

double bracket(int norm2, double power);  // (1+|l|^2)^{power}

// Binary dump: 32-byte little-endian header (magic "GFFIELD1", d, n, N as
// uint32, reserved uint32, seed uint64) then f64 (re, im) pairs, component
// by component, modes in lexicographic order.
void write_field(std::ostream& out, const SpectralField& f, std::uint64_t seed);
SpectralField read_field(std::istream& in, std::uint64_t* seed = nullptr);

// Grid helpers on [0,1)^d with G points per axis.
int fft_size_at_least(int n);  // smallest 2^a 3^b 5^c >= n
std::vector<double> synthesize(const SpectralField& f, int component, int G);
// Fourier coefficients (1/G^d) sum_x f(x) e^{-2 pi i m.x} in FFT order.
std::vector<Complex> analyze(const std::vector<double>& values, int d, int G);
// Real part of sum_m c(m) e^{2 pi i m.x}, c in FFT order.
std::vector<double> synthesize_raw(const std::vector<Complex>& c, int d, int G);

}  // namespace gibbs
