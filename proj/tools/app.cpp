#include "app.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/wick.hpp"

#include <CLI11.hpp>
#include <boost/math/statistics/linear_regression.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef GIBBS_VERSION
#define GIBBS_VERSION "0.1.0"
#endif

namespace gibbs::app {

namespace fs = std::filesystem;

namespace {

// ---- JSON reading ----

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) bad("unknown key '" + it.key() + "' in " + where);
  }
}

const Json* field(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

Rational rational_of(const Json& j, const std::string& what, bool string_only = false) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (!string_only && j.is_number_integer()) return Rational(Integer(j.get<std::int64_t>()));
  bad(what + " must be a rational string such as \"-3/2\"");
}

int int_of(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) bad(what + " is out of range");
  return static_cast<int>(v);
}

double double_of(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

std::vector<int> ints_of(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return {int_of(j, what)};
  if (!j.is_array()) bad(what + " must be an integer or a list of integers");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(int_of(x, what));
  return out;
}

std::vector<double> doubles_of(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(double_of(x, what));
  return out;
}

std::vector<Rational> rationals_of(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list of rational strings");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_of(x, what));
  return out;
}

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

ModelParams model_of(const Json& j, std::vector<int>* cutoffs, const std::string& where) {
  check_keys(j, {"d", "n", "alpha", "N"}, where);
  ModelParams p;
  const Json* d = field(j, "d");
  const Json* n = field(j, "n");
  const Json* a = field(j, "alpha");
  if (!d || !n || !a) bad(where + " needs d, n and alpha");
  p.d = int_of(*d, "d");
  p.n = int_of(*n, "n");
  if (p.d < 1 || p.d > 3) bad("d must be 1, 2 or 3");
  if (p.n < 1) bad("n must be positive");
  p.alpha = rational_of(*a, "alpha", true);
  if (cutoffs) {
    if (const Json* N = field(j, "N")) *cutoffs = ints_of(*N, "N");
  }
  return p;
}

Polynomial polynomial_of(const Json& j, int n) {
  if (j.is_string()) return parse_polynomial(j.get<std::string>(), n);
  if (!j.is_array()) bad("polynomial must be a string or a list of {exponents, coeff}");
  Polynomial F(n);
  for (const auto& t : j) {
    check_keys(t, {"exponents", "coeff"}, "polynomial term");
    const Json* e = field(t, "exponents");
    const Json* c = field(t, "coeff");
    if (!e || !c) bad("polynomial term needs exponents and coeff");
    const std::vector<int> ex = ints_of(*e, "exponents");
    if (static_cast<int>(ex.size()) != n) bad("exponent vector length differs from n");
    for (int x : ex)
      if (x < 0) bad("negative exponent");
    F.add_term(MultiIndex(ex.begin(), ex.end()), rational_of(*c, "coeff"));
  }
  return F;
}

Json polynomial_json(const Polynomial& F) {
  Json a = Json::array();
  for (const auto& [beta, c] : F.terms()) {
    Json t;
    t["exponents"] = std::vector<int>(beta.begin(), beta.end());
    t["coeff"] = to_string(c);
    a.push_back(t);
  }
  return a;
}

Ray ray_of(const Json& j) {
  check_keys(j, {"a", "r"}, "ray");
  const Json* a = field(j, "a");
  const Json* r = field(j, "r");
  if (!a || !r) bad("ray needs a and r");
  Ray ray{rationals_of(*a, "ray.a"), ints_of(*r, "ray.r")};
  if (ray.a.size() != ray.r.size()) bad("ray.a and ray.r differ in length");
  return ray;
}

Json ray_json(const Ray& ray) {
  Json j;
  j["a"] = rationals_json(ray.a);
  j["r"] = ray.r;
  return j;
}

Json boxes_json(const SearchBoxes& b) {
  Json j;
  j["q_family"] = {{"sufficient", rationals_json(b.q_sufficient)},
                   {"necessary", rationals_json(b.q_necessary)},
                   {"steps", rationals_json(b.q_steps)}};
  j["r_box"] = b.r_max;
  j["a_patterns"] = rationals_json(b.a_magnitudes);
  j["m_grid"] = {{"sufficient", rationals_json(b.m_sufficient)}, {"necessary", rationals_json(b.m_necessary)}};
  j["C_grid"] = rationals_json(b.C_grid);
  j["kappa_offsets"] = rationals_json(b.kappa_offsets);
  j["max_fixed_point_iters"] = b.q_iterations;
  j["restrict_nonzero_axes"] = b.restrict_nonzero_axes;
  return j;
}

SearchBoxes boxes_of(const Json& j) {
  check_keys(j,
             {"q_family", "r_box", "a_patterns", "m_grid", "C_grid", "kappa_offsets", "max_fixed_point_iters",
              "restrict_nonzero_axes"},
             "criteria");
  SearchBoxes b;
  if (const Json* q = field(j, "q_family")) {
    check_keys(*q, {"sufficient", "necessary", "steps"}, "criteria.q_family");
    if (const Json* x = field(*q, "sufficient")) b.q_sufficient = rationals_of(*x, "q_family.sufficient");
    if (const Json* x = field(*q, "necessary")) b.q_necessary = rationals_of(*x, "q_family.necessary");
    if (const Json* x = field(*q, "steps")) b.q_steps = rationals_of(*x, "q_family.steps");
  }
  if (const Json* x = field(j, "r_box")) b.r_max = int_of(*x, "r_box");
  if (const Json* x = field(j, "a_patterns")) b.a_magnitudes = rationals_of(*x, "a_patterns");
  if (const Json* m = field(j, "m_grid")) {
    check_keys(*m, {"sufficient", "necessary"}, "criteria.m_grid");
    if (const Json* x = field(*m, "sufficient")) b.m_sufficient = rationals_of(*x, "m_grid.sufficient");
    if (const Json* x = field(*m, "necessary")) b.m_necessary = rationals_of(*x, "m_grid.necessary");
  }
  if (const Json* x = field(j, "C_grid")) b.C_grid = rationals_of(*x, "C_grid");
  if (const Json* x = field(j, "kappa_offsets")) b.kappa_offsets = rationals_of(*x, "kappa_offsets");
  if (const Json* x = field(j, "max_fixed_point_iters")) b.q_iterations = int_of(*x, "max_fixed_point_iters");
  if (const Json* x = field(j, "restrict_nonzero_axes")) {
    if (!x->is_boolean()) bad("restrict_nonzero_axes must be a boolean");
    b.restrict_nonzero_axes = x->get<bool>();
  }
  if (b.r_max < 0 || b.q_iterations < 0) bad("search box sizes must be nonnegative");
  return b;
}

DriftConfig drift_of(const Json& j) {
  check_keys(j, {"family", "M", "delta", "eta", "b", "ray", "hypothesis", "N_factor", "rho", "optimizer"}, "drift");
  DriftConfig d;
  if (const Json* x = field(j, "family")) {
    if (!x->is_string()) bad("drift.family must be a string");
    d.family = parse_drift_family(x->get<std::string>());
  }
  if (const Json* x = field(j, "M")) d.M = ints_of(*x, "drift.M");
  if (const Json* x = field(j, "delta")) d.delta = rational_of(*x, "drift.delta");
  if (const Json* x = field(j, "eta")) d.eta = double_of(*x, "drift.eta");
  if (const Json* x = field(j, "b")) d.b = doubles_of(*x, "drift.b");
  if (const Json* x = field(j, "ray")) d.ray = ray_of(*x);
  if (const Json* h = field(j, "hypothesis")) {
    check_keys(*h, {"mass", "C", "q"}, "drift.hypothesis");
    if (const Json* x = field(*h, "mass")) d.hypothesis.mass = rational_of(*x, "hypothesis.mass");
    if (const Json* x = field(*h, "C")) d.hypothesis.C = rational_of(*x, "hypothesis.C");
    if (const Json* x = field(*h, "q")) d.hypothesis.q = rational_of(*x, "hypothesis.q");
  }
  if (const Json* x = field(j, "N_factor")) d.N_factor = int_of(*x, "drift.N_factor");
  if (const Json* x = field(j, "rho")) d.rho = double_of(*x, "drift.rho");
  if (const Json* o = field(j, "optimizer")) {
    check_keys(*o, {"N", "M", "profile_r", "use_bump", "initial_step", "min_step", "max_evaluations"},
               "drift.optimizer");
    if (const Json* x = field(*o, "N")) d.opt_N = int_of(*x, "optimizer.N");
    if (const Json* x = field(*o, "M")) d.opt_M = int_of(*x, "optimizer.M");
    if (const Json* x = field(*o, "profile_r")) d.opt_profile_r = double_of(*x, "optimizer.profile_r");
    if (const Json* x = field(*o, "use_bump")) {
      if (!x->is_boolean()) bad("optimizer.use_bump must be a boolean");
      d.opt_use_bump = x->get<bool>();
    }
    if (const Json* x = field(*o, "initial_step")) d.opt_initial_step = double_of(*x, "optimizer.initial_step");
    if (const Json* x = field(*o, "min_step")) d.opt_min_step = double_of(*x, "optimizer.min_step");
    if (const Json* x = field(*o, "max_evaluations")) d.opt_max_evaluations = int_of(*x, "optimizer.max_evaluations");
  }
  if (d.M.empty()) bad("drift.M is empty");
  if (d.N_factor < 1) bad("drift.N_factor must be positive");
  return d;
}

Json drift_json(const DriftConfig& d) {
  Json j;
  j["family"] = to_string(d.family);
  j["M"] = d.M;
  j["delta"] = to_string(d.delta);
  j["eta"] = d.eta ? Json(*d.eta) : Json(nullptr);
  j["b"] = d.b ? Json(*d.b) : Json(nullptr);
  j["ray"] = d.ray ? ray_json(*d.ray) : Json(nullptr);
  j["hypothesis"] = {{"mass", to_string(d.hypothesis.mass)},
                     {"C", to_string(d.hypothesis.C)},
                     {"q", to_string(d.hypothesis.q)}};
  j["N_factor"] = d.N_factor;
  j["rho"] = d.rho;
  j["optimizer"] = {{"N", d.opt_N},
                    {"M", d.opt_M},
                    {"profile_r", d.opt_profile_r},
                    {"use_bump", d.opt_use_bump},
                    {"initial_step", d.opt_initial_step},
                    {"min_step", d.opt_min_step},
                    {"max_evaluations", d.opt_max_evaluations}};
  return j;
}

ScalingConfig scaling_of(const Json& j) {
  check_keys(j, {"sigma", "bump", "regularity"}, "scaling");
  ScalingConfig s;
  if (const Json* x = field(j, "sigma")) {
    check_keys(*x, {"d", "alphas", "N"}, "scaling.sigma");
    if (const Json* y = field(*x, "d")) s.sigma_d = int_of(*y, "sigma.d");
    if (const Json* y = field(*x, "alphas")) s.sigma_alphas = rationals_of(*y, "sigma.alphas");
    if (const Json* y = field(*x, "N")) s.sigma_N = ints_of(*y, "sigma.N");
  }
  if (const Json* x = field(j, "bump")) {
    check_keys(*x, {"settings", "M", "rho"}, "scaling.bump");
    if (const Json* y = field(*x, "settings")) {
      if (!y->is_array()) bad("bump.settings must be a list");
      s.bump_settings.clear();
      for (const auto& e : *y) {
        check_keys(e, {"s", "r", "d"}, "bump setting");
        const Json* ss = field(e, "s");
        const Json* rr = field(e, "r");
        const Json* dd = field(e, "d");
        if (!ss || !rr || !dd) bad("bump setting needs s, r and d");
        s.bump_settings.push_back({double_of(*ss, "s"), double_of(*rr, "r"), int_of(*dd, "d")});
      }
    }
    if (const Json* y = field(*x, "M")) s.bump_M = ints_of(*y, "bump.M");
    if (const Json* y = field(*x, "rho")) s.bump_rho = double_of(*y, "bump.rho");
  }
  if (const Json* x = field(j, "regularity")) {
    check_keys(*x, {"alphas", "gamma", "N", "eps", "samples"}, "scaling.regularity");
    if (const Json* y = field(*x, "alphas")) s.reg_alphas = rationals_of(*y, "regularity.alphas");
    if (const Json* y = field(*x, "gamma")) {
      const auto g = ints_of(*y, "regularity.gamma");
      s.reg_gamma.assign(g.begin(), g.end());
    }
    if (const Json* y = field(*x, "N")) s.reg_N = ints_of(*y, "regularity.N");
    if (const Json* y = field(*x, "eps")) s.reg_eps = double_of(*y, "regularity.eps");
    if (const Json* y = field(*x, "samples")) s.reg_samples = int_of(*y, "regularity.samples");
  }
  return s;
}

Json scaling_json(const ScalingConfig& s) {
  Json j;
  j["sigma"] = {{"d", s.sigma_d}, {"alphas", rationals_json(s.sigma_alphas)}, {"N", s.sigma_N}};
  Json settings = Json::array();
  for (const auto& b : s.bump_settings) settings.push_back({{"s", b.s}, {"r", b.r}, {"d", b.d}});
  j["bump"] = {{"settings", settings}, {"M", s.bump_M}, {"rho", s.bump_rho}};
  j["regularity"] = {{"alphas", rationals_json(s.reg_alphas)},
                     {"gamma", std::vector<int>(s.reg_gamma.begin(), s.reg_gamma.end())},
                     {"N", s.reg_N},
                     {"eps", s.reg_eps},
                     {"samples", s.reg_samples}};
  return j;
}

// ---- output helpers ----

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s_ << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\r\n") == std::string::npos) {
        s_ << c;
      } else {
        s_ << '"';
        for (char ch : c) s_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        s_ << '"';
      }
    }
    s_ << "\r\n";
  }
  std::string str() const { return s_.str(); }

 private:
  std::ostringstream s_;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct Run {
  RunConfig cfg;
  std::string command;
  fs::path out;
  int threads = 1;
  std::ostream& log;
  std::vector<std::string> outputs;
  Json extra = Json::object();

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) bad("cannot write " + (out / name).string());
    f << content;
    if (!f) bad("cannot write " + (out / name).string());
    outputs.push_back(name);
  }

  const ModelParams& params() const {
    if (!cfg.params || !cfg.F) bad("this command needs model and polynomial in the config");
    return *cfg.params;
  }
  const Polynomial& F() const {
    params();
    return *cfg.F;
  }

  EstimatorConfig mc() const {
    EstimatorConfig e;
    e.cutoffs = cfg.cutoffs;
    e.samples = cfg.samples;
    e.L = cfg.L;
    e.taming = cfg.taming;
    e.seed = cfg.seed;
    e.threads = threads;
    e.batches = cfg.batches;
    return e;
  }
};

// ---- commands ----

void cmd_criteria(Run& run) {
  std::vector<CorpusEntry> entries = run.cfg.entries;
  if (entries.empty()) entries.push_back({run.cfg.name.empty() ? "model" : run.cfg.name, run.params(), run.F()});
  Json list = Json::array();
  for (const auto& e : entries) {
    const Verdict normal = classify_normalizability(e.F, e.params, run.cfg.boxes);
    const Verdict tamed = check_grand_canonical(e.F, e.params, run.cfg.boxes);
    Json j;
    j["name"] = e.name;
    j["d"] = e.params.d;
    j["n"] = e.params.n;
    j["alpha"] = to_string(e.params.alpha);
    j["polynomial"] = e.F.to_string();
    j["normalizability"] = to_json(normal);
    j["taming"] = to_json(tamed);
    list.push_back(j);
    run.log << e.name << ": " << to_string(normal.status) << ", tamed " << to_string(tamed.status) << "\n";
  }
  Json doc;
  doc["entries"] = list;
  run.write("verdicts.json", doc.dump(2) + "\n");
}

void cmd_wick(Run& run, const std::string& field_override) {
  const ModelParams& p = run.params();
  const std::string source = field_override.empty() ? run.cfg.field : field_override;
  const int N = run.cfg.cutoffs.at(0);
  SpectralField f = SpectralField::zeros(p.d, p.n, N);
  if (source.empty()) {
    f = sample_field(p, N, run.cfg.seed, 0);
  } else if (source != "zero") {
    std::ifstream in(source, std::ios::binary);
    if (!in) bad("cannot open field file " + source);
    f = read_field(in);
  }
  if (f.d() != p.d || f.n != p.n) bad("field shape does not match the model");
  const WickReport rep = wick_interaction(run.F(), p, f);
  Json j;
  j["N"] = f.N();
  j["sigma"] = rep.sigma;
  j["grid"] = rep.grid;
  j["value"] = rep.value;
  j["wick_l2"] = rep.wick_l2;
  Json terms = Json::array();
  for (const auto& [beta, v] : rep.terms)
    terms.push_back({{"exponents", std::vector<int>(beta.begin(), beta.end())}, {"value", v}});
  j["terms"] = terms;
  run.write("wick.json", j.dump(2) + "\n");
  run.log << "R_N = " << num(rep.value) << " (N = " << f.N() << ", sigma = " << num(rep.sigma) << ")\n";
}

void cmd_sample(Run& run) {
  const ModelParams& p = run.params();
  for (int N : run.cfg.cutoffs) {
    if (N < 1) bad("non-positive cutoff");
    const SpectralField f = sample_field(p, N, run.cfg.seed, 0);
    std::ostringstream s(std::ios::binary);
    write_field(s, f, run.cfg.seed);
    const std::string name = "field_N" + std::to_string(N) + ".bin";
    run.write(name, s.str());
    run.log << name << ": " << f.modes->size() << " modes\n";
  }
}

const std::vector<std::string> kTableHeader{"N", "M", "samples", "mean", "se", "truncation_hits", "seed"};

void cmd_estimate(Run& run) {
  const auto rows = estimate_log_z(run.F(), run.params(), run.mc());
  auto header = kTableHeader;
  header.push_back("max_R");
  Csv csv(header);
  for (const auto& r : rows) {
    csv.row({std::to_string(r.N), "", std::to_string(r.samples), num(r.mean), num(r.se),
             std::to_string(r.truncation_hits), std::to_string(r.seed), num(r.max_R)});
    run.log << "N=" << r.N << " mean=" << num(r.mean) << " se=" << num(r.se) << "\n";
  }
  run.write("estimate.csv", csv.str());
}

void cmd_witness(Run& run, const std::string& family_override) {
  const ModelParams& p = run.params();
  const Polynomial& F = run.F();
  DriftConfig dc = run.cfg.drift;
  if (!family_override.empty()) dc.family = parse_drift_family(family_override);
  const EstimatorConfig mc = run.mc();
  auto header = kTableHeader;
  for (const char* h : {"family", "eta", "interaction_mean", "kinetic_mean", "kinetic_expected", "taming_mean"})
    header.push_back(h);
  Csv csv(header);
  Json specs = Json::array();
  auto emit = [&](const ObjectiveEstimate& o, int M, double eta) {
    csv.row({std::to_string(o.N), std::to_string(M), std::to_string(o.samples), num(o.mean), num(o.se),
             std::to_string(o.truncation_hits), std::to_string(mc.seed), to_string(dc.family), num(eta),
             num(o.interaction_mean), num(o.kinetic_mean), num(o.kinetic_expected), num(o.taming_mean)});
    run.log << to_string(dc.family) << " M=" << M << " N=" << o.N << " objective=" << num(o.mean)
            << " se=" << num(o.se) << "\n";
  };

  if (dc.family == DriftFamily::Parametric) {
    OptimizeConfig oc;
    oc.mc = mc;
    oc.N = dc.opt_N;
    oc.M = dc.opt_M;
    oc.profile_r = dc.opt_profile_r;
    oc.use_bump = dc.opt_use_bump;
    oc.initial_step = dc.opt_initial_step;
    oc.min_step = dc.opt_min_step;
    oc.max_evaluations = dc.opt_max_evaluations;
    const OptimizeResult r = optimize_parametric(F, p, oc);
    emit(r.best, oc.use_bump ? oc.M : 0, 0);
    Json s;
    s["family"] = "PARAMETRIC";
    s["v"] = r.v;
    s["s"] = r.s;
    s["objective"] = r.best.mean;
    s["objective_se"] = r.best.se;
    s["zero_drift_objective"] = r.zero.mean;
    s["evaluations"] = r.evaluations;
    specs.push_back(s);
  } else {
    WitnessOptions opt;
    opt.eta = dc.eta;
    opt.b = dc.b;
    BumpShape shape;
    shape.rho = dc.rho;
    std::optional<Ray> ray = dc.ray;
    if (!ray && dc.family != DriftFamily::Critical)
      ray = default_witness_ray(F, p, dc.family, dc.hypothesis, run.cfg.boxes);
    for (int M : dc.M) {
      DriftWitnessSpec w;
      if (dc.family == DriftFamily::ConstShift)
        w = build_const_witness(F, p, *ray, dc.hypothesis, M, dc.delta, opt);
      else if (dc.family == DriftFamily::Bump)
        w = build_bump_witness(F, p, *ray, dc.hypothesis.C, M, opt, shape);
      else
        w = build_critical_witness(F, p, M, dc.eta.value_or(0.5), shape);
      const ObjectiveEstimate o = bd_objective(F, p, w.drift, std::max(dc.N_factor * M, w.support), mc);
      emit(o, M, w.eta);
      specs.push_back(to_json(w));
    }
  }
  run.write("witness.csv", csv.str());
  run.extra["drift_specs"] = specs;
}

void cmd_scaling(Run& run, const std::string& target) {
  const ScalingConfig& s = run.cfg.scaling;
  if (target == "sigma") {
    Csv points({"d", "alpha", "N", "sigma"});
    Csv fits({"d", "alpha", "expected_exponent", "slope", "r2", "log_slope", "log_r2"});
    for (const auto& a : s.sigma_alphas) {
      std::vector<double> Ns, logN, ys;
      for (int N : s.sigma_N) {
        if (N < 1) bad("non-positive cutoff");
        const double v = sigma_alpha_N(s.sigma_d, to_double(a), N);
        Ns.push_back(N);
        logN.push_back(std::log(static_cast<double>(N)));
        ys.push_back(v);
        points.row({std::to_string(s.sigma_d), to_string(a), std::to_string(N), num(v)});
      }
      const LogLogFit power = loglog_fit(Ns, ys);
      const auto [c0, c1, r2] = boost::math::statistics::simple_ordinary_least_squares_with_R_squared(logN, ys);
      fits.row({std::to_string(s.sigma_d), to_string(a), num(s.sigma_d - 2 * to_double(a)), num(power.slope),
                num(power.r2), num(c1), num(r2)});
      run.log << "alpha=" << to_string(a) << " slope=" << num(power.slope) << "\n";
    }
    run.write("scaling_sigma_points.csv", points.str());
    run.write("scaling_sigma.csv", fits.str());
  } else if (target == "bump") {
    BumpShape shape;
    shape.rho = s.bump_rho;
    Csv points({"s", "r", "d", "M", "moment"});
    Csv fits({"s", "r", "d", "expected", "slope", "intercept", "r2"});
    for (const auto& b : s.bump_settings) {
      const MomentRow row = moment_scan(shape, b.d, b.r, b.s, s.bump_M);
      for (std::size_t i = 0; i < row.values.size(); ++i)
        points.row({num(b.s), num(b.r), std::to_string(b.d), std::to_string(s.bump_M[i]), num(row.values[i])});
      fits.row({num(b.s), num(b.r), std::to_string(b.d), num(row.expected), num(row.fit.slope), num(row.fit.intercept),
                num(row.fit.r2)});
      run.log << "(s,r,d)=(" << num(b.s) << "," << num(b.r) << "," << b.d << ") slope=" << num(row.fit.slope)
              << " expected=" << num(row.expected) << "\n";
    }
    run.write("scaling_bump_points.csv", points.str());
    run.write("scaling_bump.csv", fits.str());
  } else if (target == "regularity") {
    Csv points({"alpha", "N", "median"});
    Csv fits({"alpha", "k", "threshold", "slope", "max_over_min", "last_over_first"});
    const int k = degree(s.reg_gamma);
    for (const auto& a : s.reg_alphas) {
      const ModelParams p{1, static_cast<int>(s.reg_gamma.size()), a};
      const auto pts = regularity_scan(p, s.reg_gamma, s.reg_N, s.reg_eps, s.reg_samples, run.cfg.seed);
      std::vector<double> Ns, med;
      for (const auto& pt : pts) {
        points.row({to_string(a), std::to_string(pt.N), num(pt.median)});
        Ns.push_back(pt.N);
        med.push_back(pt.median);
      }
      const LogLogFit fit = loglog_fit(Ns, med);
      const double ratio = *std::max_element(med.begin(), med.end()) / *std::min_element(med.begin(), med.end());
      fits.row({to_string(a), std::to_string(k), to_string(Rational(k - 1, 2 * k)), num(fit.slope), num(ratio),
                num(med.back() / med.front())});
      run.log << "alpha=" << to_string(a) << " median ratio " << num(ratio) << "\n";
    }
    run.write("scaling_regularity_points.csv", points.str());
    run.write("scaling_regularity.csv", fits.str());
  } else {
    bad("unknown scaling target '" + target + "'");
  }
}

}  // namespace

RunConfig parse_config(const Json& j) {
  check_keys(j,
             {"name", "model", "polynomial", "taming", "mc", "criteria", "entries", "drift", "scaling", "field"},
             "config");
  RunConfig c;
  if (const Json* x = field(j, "name")) {
    if (!x->is_string()) bad("name must be a string");
    c.name = x->get<std::string>();
  }
  if (const Json* m = field(j, "model")) c.params = model_of(*m, &c.cutoffs, "model");
  for (int N : c.cutoffs)
    if (N < 1) bad("cutoffs must be positive");
  if (c.cutoffs.empty()) bad("empty cutoff schedule");
  if (const Json* x = field(j, "polynomial")) {
    if (!c.params) bad("polynomial given without a model");
    c.F = polynomial_of(*x, c.params->n);
  }
  if (c.params && !c.F) bad("model given without a polynomial");
  if (const Json* t = field(j, "taming")) {
    check_keys(*t, {"K", "b"}, "taming");
    Taming tm;
    if (const Json* x = field(*t, "K")) tm.K = double_of(*x, "taming.K");
    if (const Json* x = field(*t, "b")) tm.b = double_of(*x, "taming.b");
    c.taming = tm;
  }
  if (const Json* m = field(j, "mc")) {
    check_keys(*m, {"samples", "seed", "L", "batches"}, "mc");
    if (const Json* x = field(*m, "samples")) c.samples = int_of(*x, "mc.samples");
    if (const Json* x = field(*m, "seed")) {
      if (!x->is_number_unsigned() && !(x->is_number_integer() && x->get<std::int64_t>() >= 0))
        bad("mc.seed must be a nonnegative integer");
      c.seed = x->get<std::uint64_t>();
    }
    if (const Json* x = field(*m, "L")) c.L = double_of(*x, "mc.L");
    if (const Json* x = field(*m, "batches")) c.batches = int_of(*x, "mc.batches");
  }
  if (const Json* x = field(j, "criteria")) c.boxes = boxes_of(*x);
  if (const Json* e = field(j, "entries")) {
    if (!e->is_array()) bad("entries must be a list");
    for (const auto& x : *e) {
      check_keys(x, {"name", "model", "polynomial"}, "corpus entry");
      const Json* m = field(x, "model");
      const Json* f = field(x, "polynomial");
      if (!m || !f) bad("corpus entry needs model and polynomial");
      CorpusEntry ce;
      if (const Json* nm = field(x, "name")) {
        if (!nm->is_string()) bad("entry name must be a string");
        ce.name = nm->get<std::string>();
      }
      ce.params = model_of(*m, nullptr, "entry model");
      ce.F = polynomial_of(*f, ce.params.n);
      if (ce.name.empty()) ce.name = ce.F.to_string();
      c.entries.push_back(std::move(ce));
    }
  }
  if (const Json* x = field(j, "drift")) c.drift = drift_of(*x);
  if (const Json* x = field(j, "scaling")) c.scaling = scaling_of(*x);
  if (const Json* x = field(j, "field")) {
    if (!x->is_string()) bad("field must be a path or \"zero\"");
    c.field = x->get<std::string>();
  }
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["name"] = c.name;
  if (c.params) {
    j["model"] = {{"d", c.params->d}, {"n", c.params->n}, {"alpha", to_string(c.params->alpha)}, {"N", c.cutoffs}};
    j["polynomial"] = polynomial_json(*c.F);
  }
  j["taming"] = c.taming ? Json{{"K", c.taming->K}, {"b", c.taming->b}} : Json(nullptr);
  j["mc"] = {{"samples", c.samples}, {"seed", c.seed}, {"L", c.L}, {"batches", c.batches}};
  j["criteria"] = boxes_json(c.boxes);
  Json entries = Json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"name", e.name},
                       {"model", {{"d", e.params.d}, {"n", e.params.n}, {"alpha", to_string(e.params.alpha)}}},
                       {"polynomial", polynomial_json(e.F)}});
  j["entries"] = entries;
  j["drift"] = drift_json(c.drift);
  j["scaling"] = scaling_json(c.scaling);
  j["field"] = c.field;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json to_json(const Verdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["claim"] = v.claim;
  j["theorem"] = v.theorem;
  j["witness"] = v.witness ? ray_json(*v.witness) : Json(nullptr);
  Json ev = Json::array();
  for (const auto& [k, val] : v.evidence) ev.push_back(Json::array({k, val}));
  j["evidence"] = ev;
  j["notes"] = v.notes;
  return j;
}

Json to_json(const DriftWitnessSpec& s) {
  Json j;
  j["family"] = to_string(s.family);
  j["M"] = s.M;
  j["eta"] = s.eta;
  j["b"] = s.b;
  j["ray"] = s.ray ? ray_json(*s.ray) : Json(nullptr);
  j["delta"] = to_string(s.delta);
  j["kappa1"] = to_string(s.kappa1);
  j["kappa2"] = to_string(s.kappa2);
  j["scale_exponent"] = to_string(s.scale_exponent);
  Json pairs = Json::array();
  for (const auto& [beta, gamma] : s.leading_pairs)
    pairs.push_back({{"beta", std::vector<int>(beta.begin(), beta.end())},
                     {"gamma", std::vector<int>(gamma.begin(), gamma.end())}});
  j["leading_pairs"] = pairs;
  j["p_tilde"] = s.p_tilde;
  j["amplitude"] = s.amplitude;
  j["profile_r"] = s.profile_r;
  j["alpha_M"] = s.alpha_M;
  j["beta_M"] = s.beta_M;
  j["support"] = s.support;
  j["kinetic_expected"] = s.kinetic_expected;
  return j;
}

std::string config_hash(const RunConfig& c) { return sha256_hex(to_json(c).dump()); }

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) return 2;
  if (dynamic_cast<const InconsistencyError*>(&e)) return 3;
  return 1;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalizability criteria and Monte Carlo tools for Wick-ordered Gibbs measures", "gibbsnorm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GIBBS_VERSION);

  std::string config_path, out_dir = "out", field_path, family, target;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  std::vector<CLI::Option*> seed_opts;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run config")->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    seed_opts.push_back(sub->add_option("--seed", seed, "override mc.seed"));
  };
  auto group = [&](const char* name, const char* help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };
  CLI::App* criteria_check = group("criteria", "normalizability verdicts")->add_subcommand("check", "classify");
  CLI::App* wick_eval = group("wick", "Wick-ordered interaction")->add_subcommand("eval", "evaluate R_N^F");
  CLI::App* sample_field_cmd = group("sample", "Gaussian fields")->add_subcommand("field", "dump a sampled field");
  CLI::App* estimate_z = group("estimate", "partition function")->add_subcommand("z", "Monte Carlo estimate");
  CLI::App* drift_witness = group("drift", "variational drifts")->add_subcommand("witness", "objective against M");
  CLI::App* scaling = app.add_subcommand("scaling", "scaling-law fits");
  for (CLI::App* sub : {criteria_check, wick_eval, sample_field_cmd, estimate_z, drift_witness, scaling}) common(sub);
  wick_eval->add_option("--field", field_path, "binary field dump, or \"zero\"");
  drift_witness->add_option("--family", family, "CONST_SHIFT, BUMP, CRITICAL or PARAMETRIC");
  scaling->add_option("target", target, "sigma, bump or regularity")
      ->required()
      ->check(CLI::IsMember({"sigma", "bump", "regularity"}));

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Run run{load_config(config_path), "", out_dir, threads, out};
    for (CLI::Option* o : seed_opts)
      if (o->count()) run.cfg.seed = seed;
    fs::create_directories(run.out);
    const std::string started = utc_now();
    if (criteria_check->parsed()) {
      run.command = "criteria check";
      cmd_criteria(run);
    } else if (wick_eval->parsed()) {
      run.command = "wick eval";
      cmd_wick(run, field_path);
    } else if (sample_field_cmd->parsed()) {
      run.command = "sample field";
      cmd_sample(run);
    } else if (estimate_z->parsed()) {
      run.command = "estimate z";
      cmd_estimate(run);
    } else if (drift_witness->parsed()) {
      run.command = "drift witness";
      cmd_witness(run, family);
    } else {
      run.command = "scaling " + target;
      cmd_scaling(run, target);
    }
    Json manifest;
    manifest["tool"] = "gibbsnorm";
    manifest["version"] = GIBBS_VERSION;
    manifest["command"] = run.command;
    manifest["config_path"] = config_path;
    manifest["config_sha256"] = config_hash(run.cfg);
    manifest["seeds"] = {{"mc", run.cfg.seed}};
    manifest["threads"] = threads;
    manifest["search_boxes"] = boxes_json(run.cfg.boxes);
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_now();
    manifest["outputs"] = run.outputs;
    for (auto it = run.extra.begin(); it != run.extra.end(); ++it) manifest[it.key()] = it.value();
    manifest["config"] = to_json(run.cfg);
    std::ofstream mf(run.out / "manifest.json");
    mf << manifest.dump(2) << "\n";
    if (!mf) bad("cannot write manifest.json");
    return 0;
  } catch (const std::exception& e) {
    const int code = exit_code(e);
    err << "gibbsnorm: " << (code == 2 ? "config error: " : code == 3 ? "internal inconsistency: " : "error: ")
        << e.what() << "\n";
    return code;
  }
}

}  // namespace gibbs::app
