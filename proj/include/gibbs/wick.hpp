#pragma once

#include "gibbs/field.hpp"
#include "gibbs/polynomial.hpp"

#include <vector>

namespace gibbs {

// Hermite polynomials with variance parameter sigma:
// H_0 = 1, H_1 = x, H_{l+1} = x H_l - l sigma H_{l-1}.
double hermite(int l, double x, double sigma);
// H_0..H_K at x, written to out[0..K].
void hermite_table(int K, double x, double sigma, double* out);
double hermite_multi(const MultiIndex& beta, const std::vector<double>& x, double sigma);
// Right-hand side of H_a(x+y; c) = sum_{0<=b<=a} C(a,b) H_b(x; c) y^{a-b}.
double hermite_addition(const MultiIndex& a, const std::vector<double>& x, const std::vector<double>& y, double c);

// sigma_{alpha,N} = sum_{l in Z^d, |l| <= N} (1+|l|^2)^{-alpha}, with
// compensated summation.
double sigma_alpha_N(int d, double alpha, int N);

// Smallest FFT-friendly grid with at least 2kN+1 points per axis.
int wick_grid_size(int k, int N);

struct WickReport {
  double value = 0;  // R_N^F(Phi)
  std::vector<std::pair<MultiIndex, double>> terms;
  double wick_l2 = 0;  // int :|Phi|^2: dx
  double sigma = 0;
  int grid = 0;
};

// R_N^F(Phi) = int sum_beta c_beta H_beta(P_N Phi(x); sigma_{alpha,N}) dx,
// N the field cutoff, evaluated as a mean over a uniform grid. grid = 0
// picks wick_grid_size(deg F, N); larger grids give the same value up to
// rounding since the integrand is a trigonometric polynomial.
WickReport wick_interaction(const Polynomial& F, const ModelParams& params, const SpectralField& field,
                            int grid = 0);

// int :|Phi|^2: dx = sum_i (sum_l |Phi_i^(l)|^2 - sigma).
double wick_l2(const SpectralField& field, double sigma);

// :Phi^gamma:(x) = prod_i H_{gamma_i}(Phi_i(x); sigma) on a G^d grid.
std::vector<double> wick_power_grid(const SpectralField& field, const MultiIndex& gamma, double sigma, int G);

// Grid sup of |<grad>^s :Y_N^gamma:| with s = (alpha - d/2)|gamma| - eps.
double regularity_proxy(const SpectralField& field, const MultiIndex& gamma, double sigma, double s);

struct RegularityPoint {
  int N;
  double median;
  std::vector<double> values;
};
std::vector<RegularityPoint> regularity_scan(const ModelParams& params, const MultiIndex& gamma,
                                             const std::vector<int>& cutoffs, double eps, int samples,
                                             std::uint64_t seed);

}  // namespace gibbs
