#pragma once

#include "gibbs/field.hpp"
#include "gibbs/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gibbs {

// Adds K |int :|Phi|^2: dx|^b to the objective (or multiplies the weight by
// its exponential in the partition function).
struct Taming {
  double K = 1;
  double b = 1;
};

struct EstimatorConfig {
  std::vector<int> cutoffs;
  int samples = 1000;
  double L = 50;  // truncation level for R_N
  std::optional<Taming> taming;
  std::uint64_t seed = 1;
  int threads = 1;
  int batches = 32;
};

struct MeanSe {
  double mean = 0;
  double se = 0;
};
// Batch-means standard error; fewer samples than batches falls back to
// one sample per batch.
MeanSe batch_means(const std::vector<double>& x, int batches);

struct EstimateRow {
  int N = 0;
  int M = 0;
  int samples = 0;
  double mean = 0;
  double se = 0;
  int truncation_hits = 0;
  double max_R = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo of E[exp(R_N^F(Y_N) ^ L) * taming weight] for each cutoff.
std::vector<EstimateRow> estimate_log_z(const Polynomial& F, const ModelParams& params, const EstimatorConfig& cfg);

// A drift whose integrated effect is I(theta)(1) = S - Y_M(eta) (with
// cancel_noise) or just S, where S is deterministic. With cancel_noise the
// drift is theta(t) = <grad>^alpha S on [0, eta) and
// <grad>^alpha (S - Y_M(eta)/(1-eta)) on [eta, 1].
struct ShiftDrift {
  SpectralField shift = SpectralField::zeros(1, 1, 0);
  bool cancel_noise = false;
  int M = 0;
  double eta = 0;
};

// (1/2) int_0^1 ||P_N theta(t)||^2 dt for one path; Y_eta is ignored
// without cancel_noise.
double kinetic_pathwise(const ShiftDrift& drift, const SpectralField* Y_eta, double alpha, int N);
// Its expectation: (1/2)(||<grad>^alpha S||^2 + n eta #{|l| <= M} / (1-eta)).
double kinetic_expected(const ShiftDrift& drift, double alpha, int N);

struct ObjectiveEstimate {
  int N = 0;
  int M = 0;
  int samples = 0;
  double mean = 0;
  double se = 0;
  double interaction_mean = 0;  // E[-(R ^ L)]
  double kinetic_mean = 0;
  double kinetic_expected = 0;
  double taming_mean = 0;
  int truncation_hits = 0;
};

// E[-(R_N^F(Y + I(theta)) ^ L) + taming + (1/2) int ||theta||^2] at cutoff N.
ObjectiveEstimate bd_objective(const Polynomial& F, const ModelParams& params, const ShiftDrift& drift, int N,
                               const EstimatorConfig& cfg);

// Var[int :Y_N^gamma: dx] = gamma! sum over l_1 + ... + l_k = 0, |l_j| <= N
// of prod (1+|l_j|^2)^{-alpha}, k = |gamma|. Brute force over mode tuples.
double wick_variance_oracle(const ModelParams& params, const MultiIndex& gamma, int N);

}  // namespace gibbs
