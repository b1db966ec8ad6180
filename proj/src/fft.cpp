#include "gibbs/errors.hpp"
#include "gibbs/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace gibbs {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct Plan {
  int d, G, sign;
  std::size_t size;
  fftw_complex* buf;
  fftw_plan plan;
};

struct PlanCache {
  std::vector<Plan> plans;
  ~PlanCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& p : plans) {
      fftw_destroy_plan(p.plan);
      fftw_free(p.buf);
    }
  }
  Plan& get(int d, int G, int sign) {
    for (auto& p : plans)
      if (p.d == d && p.G == G && p.sign == sign) return p;
    std::size_t size = 1;
    int dims[3];
    for (int i = 0; i < d; ++i) {
      size *= static_cast<std::size_t>(G);
      dims[i] = G;
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
    fftw_plan plan = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE);
    plans.push_back({d, G, sign, size, buf, plan});
    return plans.back();
  }
};

Plan& plan_for(int d, int G, int sign) {
  thread_local PlanCache cache;
  return cache.get(d, G, sign);
}

std::size_t wrap_flat(const int* l, int d, int G) {
  std::size_t flat = 0;
  for (int j = 0; j < d; ++j) flat = flat * G + static_cast<std::size_t>(((l[j] % G) + G) % G);
  return flat;
}

}  // namespace

int fft_size_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int x = m;
    for (int p : {2, 3, 5})
      while (x % p == 0) x /= p;
    if (x == 1) return m;
  }
}

std::vector<double> synthesize(const SpectralField& f, int component, int G) {
  const ModeSet& ms = *f.modes;
  if (G < 2 * ms.N() + 1) throw ConfigError("grid too coarse for the field cutoff");
  if (f.hermitian_defect() > 1e-10) throw ConfigError("field is not real: Hermitian symmetry violated");
  Plan& p = plan_for(ms.d(), G, FFTW_BACKWARD);
  std::memset(p.buf, 0, sizeof(fftw_complex) * p.size);
  const auto& c = f.coef[component];
  for (int i = 0; i < ms.size(); ++i) {
    const std::size_t k = wrap_flat(ms.mode(i), ms.d(), G);
    p.buf[k][0] = c[i].real();
    p.buf[k][1] = c[i].imag();
  }
  fftw_execute(p.plan);
  std::vector<double> out(p.size);
  for (std::size_t k = 0; k < p.size; ++k) out[k] = p.buf[k][0];
  return out;
}

std::vector<Complex> analyze(const std::vector<double>& values, int d, int G) {
  Plan& p = plan_for(d, G, FFTW_FORWARD);
  if (values.size() != p.size) throw ConfigError("grid size mismatch");
  for (std::size_t k = 0; k < p.size; ++k) {
    p.buf[k][0] = values[k];
    p.buf[k][1] = 0;
  }
  fftw_execute(p.plan);
  std::vector<Complex> out(p.size);
  const double inv = 1.0 / static_cast<double>(p.size);
  for (std::size_t k = 0; k < p.size; ++k) out[k] = Complex(p.buf[k][0], p.buf[k][1]) * inv;
  return out;
}

std::vector<double> synthesize_raw(const std::vector<Complex>& c, int d, int G) {
  Plan& p = plan_for(d, G, FFTW_BACKWARD);
  if (c.size() != p.size) throw ConfigError("grid size mismatch");
  for (std::size_t k = 0; k < p.size; ++k) {
    p.buf[k][0] = c[k].real();
    p.buf[k][1] = c[k].imag();
  }
  fftw_execute(p.plan);
  std::vector<double> out(p.size);
  for (std::size_t k = 0; k < p.size; ++k) out[k] = p.buf[k][0];
  return out;
}

}  // namespace gibbs
