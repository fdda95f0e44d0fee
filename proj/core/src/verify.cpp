#include "hclab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hclab/errors.hpp"
#include "hclab/functionals.hpp"
#include "hclab/solver.hpp"

namespace hclab {

namespace {

// ω h Σ τ_i f_i, the dx-integral of a density already multiplied by r^N.
double t_integral(const ProblemParams& p, const LogGrid& g, const std::vector<double>& f) {
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) s += g.tau(i) * f[i];
  return p.omega * g.h() * s;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

// C^∞ step, 1 for x ≤ 0 and 0 for x ≥ 1.
double smooth_step(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - x)), b = std::exp(-1.0 / x);
  return a / (a + b);
}

void require_dimension(const ProblemParams& p, const RadialField& u) {
  if (u.grid().dimension() != p.N) throw Error(ErrorKind::dimension, "grid dimension does not match N");
}

LineFit fit_line(const RadialField& u, IndexWindow w) {
  if (w.size() < 3) throw Error(ErrorKind::fit, "decay fit window needs at least 3 nodes");
  const auto& g = u.grid();
  double sx = 0, sy = 0;
  std::vector<double> y(w.size());
  for (int i = w.begin; i < w.end; ++i) {
    if (!(u[i] > 0.0)) {
      std::ostringstream os;
      os << "decay fit needs u > 0, got " << u[i] << " at node " << i;
      throw Error(ErrorKind::fit, os.str());
    }
    y[i - w.begin] = std::log(u[i]);
    sx += g.t(i);
    sy += y[i - w.begin];
  }
  const double mx = sx / w.size(), my = sy / w.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = w.begin; i < w.end; ++i) {
    const double dx = g.t(i) - mx, dy = y[i - w.begin] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit f;
  f.window = w;
  f.slope = sxy / sxx;
  double ss_res = 0;
  for (int i = w.begin; i < w.end; ++i) {
    const double e = y[i - w.begin] - (my + f.slope * (g.t(i) - mx));
    ss_res += e * e;
  }
  f.rms = std::sqrt(ss_res / w.size());
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace

RadialField bubble(const ProblemParams& params, GridPtr grid, double t) {
  if (params.theta != 0.0) throw Error(ErrorKind::parameter, "bubble profile exists only for theta = 0");
  if (!(t > 0.0)) throw Error(ErrorKind::parameter, "bubble scale must be > 0");
  const double k = params.kappa();
  return RadialField::sample(std::move(grid),
                             [=](double r) { return std::pow(t / (t * t + r * r), k); });
}

RadialField model_profile(const ProblemParams& params, GridPtr grid) {
  return default_init(params, std::move(grid));
}

Calibration calibrate_amplitude(const ProblemParams& params, const RieszOperator& op,
                                const RadialField& w) {
  if (params.theta != 0.0) throw Error(ErrorKind::parameter, "amplitude calibration needs theta = 0");
  const ScaledEnergy e(params, op);
  const auto phi = e.to_scaled(w);
  const auto pot = e.potential(phi);
  const auto lap = e.apply_operator(phi);
  const auto win = fraction_window(e.grid(), 0.2, 0.8);
  std::vector<double> ratio;
  ratio.reserve(win.size());
  for (int i = win.begin; i < win.end; ++i) {
    if (!(phi[i] > 0.0)) throw Error(ErrorKind::precondition, "calibration needs w > 0 on the interior");
    ratio.push_back(lap[i] / (pot[i] * std::pow(phi[i], params.pbar - 1.0)));
  }
  const double med = median(ratio);
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  Calibration c;
  c.spread = (*hi - *lo) / std::abs(med);
  if (!(med > 0.0) || !(c.spread <= 1e-3)) {
    std::ostringstream os;
    os << "profile is not a solution shape: ratio spread " << c.spread << " exceeds 1e-3";
    throw Error(ErrorKind::calibration, os.str());
  }
  c.amplitude = std::pow(med, 1.0 / (2.0 * params.pbar - 2.0));
  return c;
}

RadialField to_weighted(const ProblemParams& params, const RadialField& u) {
  return from_exp_weighted(u.grid_ptr(), u.values(), -params.beta);
}

RadialField from_weighted(const ProblemParams& params, const RadialField& v) {
  return from_exp_weighted(v.grid_ptr(), v.values(), params.beta);
}

double transform_identity_check(const ProblemParams& params, const RadialField& u) {
  require_dimension(params, u);
  const auto& g = u.grid();
  const int n = g.size();
  const auto v = to_weighted(params, u);
  const auto du = t_derivative8(u.values(), g.h());
  if (params.beta == 0.0) {
    // v = u and both sides are the same integral.
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::exp((params.N - 2) * g.t(i)) * du[i] * du[i];
    if (!(t_integral(params, g, f) > 0.0)) throw Error(ErrorKind::degenerate, "transform identity needs Phi(u) > 0");
    return 0.0;
  }
  const auto dv = t_derivative8(v.values(), g.h());
  std::vector<double> lhs(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const double t = g.t(i);
    lhs[i] = std::exp((params.N - 2) * t) * (du[i] * du[i] - params.theta * u[i] * u[i]);
    rhs[i] = std::exp((params.N - 2 - 2 * params.beta) * t) * dv[i] * dv[i];
  }
  const double a = t_integral(params, g, lhs), b = t_integral(params, g, rhs);
  if (!(a > 0.0)) throw Error(ErrorKind::degenerate, "transform identity needs Phi(u) > 0");
  return std::abs(a - b) / a;
}

double divergence_identity_check(const ProblemParams& params, const RadialField& u) {
  require_dimension(params, u);
  const auto& g = u.grid();
  const int n = g.size();
  const auto du = t_derivative8(u.values(), g.h());
  std::vector<double> sq(n), cross(n);
  for (int i = 0; i < n; ++i) {
    const double w = std::exp((params.N - 2) * g.t(i));
    sq[i] = w * u[i] * u[i];
    cross[i] = w * u[i] * du[i];
  }
  const double a = t_integral(params, g, sq);
  if (a == 0.0) return 0.0;
  const double flux = params.omega * (sq[n - 1] - sq[0]);
  return std::abs((params.N - 2) * a + 2.0 * t_integral(params, g, cross) - flux) / a;
}

double hardy_constant(const ProblemParams& params) {
  const double c = 2.0 / (params.N - 2);
  return c * c;
}

double weighted_hardy_constant(const ProblemParams& params) {
  const double c = 2.0 / (params.N - 2.0 * params.beta - 2.0);
  return c * c;
}

namespace {

double weighted_hardy_ratio(const ProblemParams& params, const RadialField& v, double beta) {
  require_dimension(params, v);
  const auto& g = v.grid();
  const int n = g.size();
  const auto dv = t_derivative8(v.values(), g.h());
  std::vector<double> num(n), den(n);
  for (int i = 0; i < n; ++i) {
    const double w = std::exp((params.N - 2 - 2 * beta) * g.t(i));
    num[i] = w * v[i] * v[i];
    den[i] = w * dv[i] * dv[i];
  }
  const double d = t_integral(params, g, den);
  if (!(d > 0.0)) throw Error(ErrorKind::degenerate, "Hardy ratio with zero gradient energy");
  return t_integral(params, g, num) / d;
}

}  // namespace

double hardy_check(const ProblemParams& params, const RadialField& u) {
  return weighted_hardy_ratio(params, u, 0.0);
}

double weighted_hardy_check(const ProblemParams& params, const RadialField& v) {
  return weighted_hardy_ratio(params, v, params.beta);
}

double hls_ratio(const ProblemParams& params, const RieszOperator& op, const RadialField& f) {
  const double p = 2.0 * params.N / (params.N + params.alpha);
  const auto fp = RadialField(f.grid_ptr(), [&] {
    std::vector<double> v(f.size());
    for (int i = 0; i < f.size(); ++i) v[i] = std::pow(std::abs(f[i]), p);
    return v;
  }());
  const double norm = std::pow(integrate(fp), 1.0 / p);
  if (!(norm > 0.0)) throw Error(ErrorKind::degenerate, "HLS ratio of a zero field");
  return op.hls_pairing(f, f, false) / (norm * norm);
}

HlsCheck hls_extremal_check(const ProblemParams& params, const RieszOperator& op, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::parameter, "extremal scale must be > 0");
  const auto& g = op.grid();
  const double e = 0.5 * (params.N + params.alpha);
  const auto f = RadialField::sample(op.grid_ptr(),
                                     [&](double r) { return std::pow(scale * scale + r * r, -e); });
  // f^p = (s² + r²)^{-N}: mass below r_min is about s^{-2N} ω r_min^N/N, above
  // r_max about ω r_max^{-N}/N; the total is known in closed form only up to Γ's,
  // so compare against the quadrature.
  const double N = params.N;
  const double r0 = g.r(0), r1 = g.r(g.size() - 1);
  const double outside = params.omega / N * (std::pow(scale, -2 * N) * std::pow(r0, N) + std::pow(r1, -N));
  std::vector<double> fp(g.size());
  for (int i = 0; i < g.size(); ++i) fp[i] = std::pow(f[i], 2.0 * N / (N + params.alpha));
  const double inside = integrate(RadialField(op.grid_ptr(), std::move(fp)));
  if (outside > 1e-8 * inside) {
    std::ostringstream os;
    os << "HLS extremal: " << outside / inside << " of the L^p mass lies outside the window";
    warn(os.str());
  }
  return {hls_ratio(params, op, f), params.s_hls};
}

RadialField kelvin(const ProblemParams& params, const RadialField& u) {
  require_dimension(params, u);
  const auto& g = u.grid();
  if (!g.symmetric()) throw Error(ErrorKind::configuration, "Kelvin transform needs a symmetric grid");
  const int n = g.size();
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = std::exp((2 - params.N) * g.t(i)) * u[n - 1 - i];
  return RadialField(u.grid_ptr(), std::move(k));
}

DecayFit decay_fit(const RadialField& u, IndexWindow inner, IndexWindow outer) {
  return {fit_line(u, inner), fit_line(u, outer)};
}

DecayFit decay_fit(const RadialField& u) {
  return decay_fit(u, fraction_window(u.grid(), 0.05, 0.25), fraction_window(u.grid(), 0.75, 0.95));
}

BoundCertificate bound_check(const ProblemParams& params, const RadialField& u) {
  require_dimension(params, u);
  const auto m = model_profile(params, u.grid_ptr());
  BoundCertificate c;
  c.window = fraction_window(u.grid(), 0.05, 0.95);
  c.c_low = std::numeric_limits<double>::infinity();
  c.c_high = 0.0;
  for (int i = c.window.begin; i < c.window.end; ++i) {
    if (!(u[i] > 0.0)) {
      ++c.violations;
      continue;
    }
    const double q = u[i] / m[i];
    c.c_low = std::min(c.c_low, q);
    c.c_high = std::max(c.c_high, q);
  }
  if (c.violations > 0 || c.c_high == 0.0) c.c_low = 0.0;
  return c;
}

double weighted_sup_ratio(const ProblemParams& params, const RadialField& u) {
  const auto v = to_weighted(params, u);
  const auto w = fraction_window(u.grid(), 0.0, 0.5);
  std::vector<double> vals(v.values().begin() + w.begin, v.values().begin() + w.end);
  const double med = median(vals);
  if (!(med > 0.0)) throw Error(ErrorKind::degenerate, "weighted profile has nonpositive median");
  return *std::max_element(vals.begin(), vals.end()) / med;
}

RadialField bump(GridPtr grid, double center, double half_width, double amplitude) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double x = (grid->t(i) - center) / half_width;
    v[i] = std::abs(x) < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
  }
  return RadialField(std::move(grid), std::move(v));
}

RadialField gaussian_bump(GridPtr grid, double center, double width, double amplitude) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double z = (grid->t(i) - center) / width;
    v[i] = amplitude * std::exp(-0.5 * z * z);
  }
  return RadialField(std::move(grid), std::move(v));
}

RadialField random_bump_field(GridPtr grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> center(-5.0, 5.0), width(1.0, 4.0), amp(0.2, 1.0);
  std::vector<double> v(grid->size(), 0.0);
  const int k = count(rng);
  for (int j = 0; j < k; ++j) {
    const double c = center(rng), w = width(rng), a = amp(rng);
    const auto b = bump(grid, c, w, a);
    for (int i = 0; i < grid->size(); ++i) v[i] += b[i];
  }
  return RadialField(std::move(grid), std::move(v));
}

RadialField hardy_extremal(const ProblemParams& params, GridPtr grid, double eps, double ramp) {
  if (!(eps > 0.0 && eps < 1.0) || !(ramp > 0.0)) {
    throw Error(ErrorKind::parameter, "Hardy extremal needs 0 < eps < 1 and ramp > 0");
  }
  const double L = -std::log(eps);
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double t = grid->t(i);
    v[i] = std::exp(-params.kappa() * t) * smooth_step((std::abs(t) - L) / ramp);
  }
  return RadialField(std::move(grid), std::move(v));
}

}  // namespace hclab
