#pragma once

#include "gibbs/criteria.hpp"
#include "gibbs/drift.hpp"

#include <json.hpp>

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gibbs::app {

using Json = nlohmann::ordered_json;

struct CorpusEntry {
  std::string name;
  ModelParams params;
  Polynomial F{1};
};

struct DriftConfig {
  DriftFamily family = DriftFamily::ConstShift;
  std::vector<int> M{4, 8, 16, 32};
  Rational delta = 1;
  std::optional<double> eta;
  std::optional<std::vector<double>> b;
  std::optional<Ray> ray;
  WitnessHypothesis hypothesis;
  int N_factor = 2;  // objective cutoff N = max(N_factor M, shift support)
  double rho = 1;
  // parametric family only
  int opt_N = 16;
  int opt_M = 4;
  double opt_profile_r = 2;
  bool opt_use_bump = true;
  double opt_initial_step = 1;
  double opt_min_step = 1e-3;
  int opt_max_evaluations = 200;
};

struct BumpSetting {
  double s = 2;
  double r = 3;
  int d = 1;
};

struct ScalingConfig {
  int sigma_d = 1;
  std::vector<Rational> sigma_alphas{Rational(3, 10), Rational(1, 2)};
  std::vector<int> sigma_N{1024, 2048, 4096, 8192, 16384, 32768, 65536};
  std::vector<BumpSetting> bump_settings{{2, 3, 1}, {1.5, 4, 1}, {3, 2, 1}};
  std::vector<int> bump_M{32, 64, 128, 256, 512, 1024};
  double bump_rho = 1;
  std::vector<Rational> reg_alphas{Rational(9, 20), Rational(1, 4)};
  MultiIndex reg_gamma{3};
  std::vector<int> reg_N{32, 64, 128, 256};
  double reg_eps = 0.05;
  int reg_samples = 64;
};

struct RunConfig {
  std::string name;
  std::optional<ModelParams> params;
  std::vector<int> cutoffs{8};
  std::optional<Polynomial> F;
  std::optional<Taming> taming;
  int samples = 1000;
  std::uint64_t seed = 1;
  double L = 50;
  int batches = 32;
  SearchBoxes boxes;
  std::vector<CorpusEntry> entries;
  DriftConfig drift;
  ScalingConfig scaling;
  std::string field;  // binary field dump, "zero", or empty to sample one
};

RunConfig parse_config(const Json& j);
Json to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

Json to_json(const Verdict& v);
Json to_json(const DriftWitnessSpec& s);

// sha256 of the compact dump of to_json(c)
std::string config_hash(const RunConfig& c);

// 2 for ConfigError and malformed input, 3 for InconsistencyError, 1 otherwise.
int exit_code(const std::exception& e);

// Full command line, argv[0] included.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace gibbs::app
