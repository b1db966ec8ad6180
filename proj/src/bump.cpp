#include "gibbs/drift.hpp"

#include "gibbs/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/statistics/linear_regression.hpp>

#include <cmath>

namespace gibbs {

double bump_hat(const BumpShape& shape, int d, double xi2) {
  const double t = xi2 / (shape.rho * shape.rho);
  if (t >= 1) return 0;
  return bump_amplitude(shape, d) * std::exp(-1 / (1 - t));
}

double bump_amplitude(const BumpShape& shape, int d) {
  if (!shape.normalize) return 1;
  // int_{R^d} exp(-1/(1-|xi|^2)) = |S^{d-1}| int_0^1 t^{d-1} exp(-1/(1-t^2)) dt
  thread_local int cached_d = 0;
  thread_local double cached = 0;
  if (cached_d != d) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double radial = integrator.integrate(
        [d](double t) { return t >= 1 ? 0.0 : std::pow(t, d - 1) * std::exp(-1 / (1 - t * t)); }, 0.0, 1.0);
    const double pi = boost::math::constants::pi<double>();
    const double sphere = 2 * std::pow(pi, d / 2.0) / boost::math::tgamma(d / 2.0);
    cached = sphere * radial;
    cached_d = d;
  }
  return 1 / (cached * std::pow(shape.rho, d));
}

BumpProfile build_bump(const BumpShape& shape, int d, int M, double r) {
  if (d < 1 || M < 1) throw ConfigError("bump profile needs d >= 1 and M >= 1");
  if (!(r > 0)) throw ConfigError("bump profile needs r > 0");
  if (!(shape.rho > 0 && shape.rho <= 1)) throw ConfigError("unsupported profile: rho must lie in (0, 1]");
  BumpProfile out;
  out.shape = shape;
  out.d = d;
  out.M = M;
  out.r = r;
  out.field = SpectralField::zeros(d, 1, M);
  const ModeSet& ms = *out.field.modes;
  const double scale = std::pow(static_cast<double>(M), d / r - d);
  const double M2 = static_cast<double>(M) * M;
  for (int i = 0; i < ms.size(); ++i) out.field.coef[0][i] = scale * bump_hat(shape, d, ms.norm2(i) / M2);
  return out;
}

SpectralField project_grid(const std::vector<double>& values, int d, int G, int N) {
  if (G < 2 * N + 1) throw ConfigError("grid too coarse for the projection cutoff");
  const std::vector<Complex> c = analyze(values, d, G);
  SpectralField out = SpectralField::zeros(d, 1, N);
  const ModeSet& ms = *out.modes;
  for (int i = 0; i < ms.size(); ++i) {
    std::size_t flat = 0;
    for (int j = 0; j < d; ++j) flat = flat * G + static_cast<std::size_t>((ms.mode(i)[j] % G + G) % G);
    out.coef[0][i] = c[flat];
  }
  // Symmetrise away rounding so downstream real-field checks pass.
  for (int i = 0; i < ms.size(); ++i) {
    const int j = ms.negated(i);
    if (j < i) continue;
    const Complex avg = 0.5 * (out.coef[0][i] + std::conj(out.coef[0][j]));
    out.coef[0][i] = avg;
    out.coef[0][j] = std::conj(avg);
  }
  return out;
}

SpectralField field_power(const SpectralField& f, int p) {
  if (p < 1) throw ConfigError("field_power needs p >= 1");
  if (f.n != 1) throw ConfigError("field_power works on scalar fields");
  if (p == 1) return f;
  const int N = f.N();
  const int G = fft_size_at_least(2 * p * N + 1);
  std::vector<double> v = synthesize(f, 0, G);
  for (double& x : v) x = std::pow(x, p);
  return project_grid(v, f.d(), G, p * N);
}

double power_integral(const SpectralField& f, double p) {
  if (f.n != 1) throw ConfigError("power_integral works on scalar fields");
  if (!(p > 0)) throw ConfigError("power_integral needs p > 0");
  const int N = f.N();
  const bool even_int = p == std::floor(p) && static_cast<long>(p) % 2 == 0;
  const int G = even_int ? fft_size_at_least(std::max(2 * N + 1, static_cast<int>(p) * N + 1))
                         : fft_size_at_least(8 * static_cast<int>(std::ceil(p)) * N + 1);
  const std::vector<double> v = synthesize(f, 0, G);
  double total = 0, comp = 0;  // Kahan
  for (double x : v) {
    const double y = std::pow(std::abs(x), p) - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total / static_cast<double>(v.size());
}

double hbeta_power_norm2(const SpectralField& f, int p, double beta) {
  const SpectralField g = field_power(f, p);
  const ModeSet& ms = *g.modes;
  double total = 0;
  for (int i = 0; i < ms.size(); ++i) total += bracket(ms.norm2(i), beta) * std::norm(g.coef[0][i]);
  return total;
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("log-log fit needs at least two points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw ConfigError("log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  auto [c0, c1, r2] = boost::math::statistics::simple_ordinary_least_squares_with_R_squared(lx, ly);
  return {c1, c0, r2};
}

MomentRow moment_scan(const BumpShape& shape, int d, double r, double s, const std::vector<int>& Ms) {
  MomentRow row;
  row.s = s;
  row.r = r;
  row.d = d;
  row.expected = s * d - d;
  std::vector<double> xs;
  for (int M : Ms) {
    const BumpProfile bp = build_bump(shape, d, M, r);
    row.values.push_back(power_integral(bp.field, s * r));
    xs.push_back(M);
  }
  row.fit = loglog_fit(xs, row.values);
  return row;
}

HbetaRow hbeta_scan(const BumpShape& shape, int d, double r, double s, double beta, const std::vector<int>& Ms) {
  const double sr = s * r;
  if (std::abs(sr - std::round(sr)) > 1e-12 || sr < 1) throw ConfigError("H^beta scan needs sr to be a positive integer");
  HbetaRow row;
  row.s = s;
  row.r = r;
  row.beta = beta;
  row.d = d;
  row.bound = 2 * beta + 2 * s * d - d;
  std::vector<double> xs, ys;
  for (int M : Ms) {
    const BumpProfile bp = build_bump(shape, d, M, r);
    ys.push_back(hbeta_power_norm2(bp.field, static_cast<int>(std::lround(sr)), beta));
    xs.push_back(M);
  }
  row.fit = loglog_fit(xs, ys);
  return row;
}

}  // namespace gibbs
