#include "hclab/riesz.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "hclab/errors.hpp"

namespace hclab {

namespace {

constexpr int gl_order = 20;

struct GaussLegendre {
  std::array<double, gl_order> x{}, w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre g;
    const int n = gl_order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      g.x[i] = -z;
      g.x[n - 1 - i] = z;
      g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return g;
  }();
  return rule;
}

// Γ(N/2)/(√π Γ((N-1)/2)) = |S^{N-2}| / |S^{N-1}|.
double mean_prefactor(int N) {
  return std::exp(std::lgamma(0.5 * N) - 0.5 * std::log(std::numbers::pi) -
                  std::lgamma(0.5 * (N - 1)));
}

// ₂F₁(a, b; c; z) by its power series, for 0 ≤ z ≤ 1/4.
double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 400; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Sphere average of |e - ρσ|^{α-N} for 1/2 < ρ < 1.
double sphere_mean_quadrature(int N, double alpha, double rho) {
  const auto& gl = gauss_legendre();
  const double a = 0.5 * (N - alpha);
  const double d = 1.0 - rho;
  const double pi = std::numbers::pi;

  auto integrand = [&](double phi) {
    const double s = std::sin(0.5 * phi);
    const double base = d * d + 4.0 * rho * s * s;
    return std::pow(base, -a) * std::pow(std::sin(phi), N - 2);
  };

  // panels [0,d], [d,2d], [2d,4d], ... resolve the peak of width ~d at φ = 0
  double sum = 0.0;
  double lo = 0.0, hi = std::min(d, pi);
  while (lo < pi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double panel = 0.0;
    for (int q = 0; q < gl_order; ++q) panel += gl.w[q] * integrand(mid + half * gl.x[q]);
    sum += half * panel;
    lo = hi;
    hi = (2.0 * hi >= 0.75 * pi) ? pi : 2.0 * hi;
  }
  return mean_prefactor(N) * sum;
}

double sphere_mean(int N, double alpha, double rho) {
  const double a = 0.5 * (N - alpha);
  const double lam = 0.5 * (N - 2);
  if (rho <= 0.5) return hyp2f1_series(a, a - lam, lam + 1.0, rho * rho);
  if (rho < 1.0) return sphere_mean_quadrature(N, alpha, rho);
  if (rho == 1.0) {
    if (alpha <= 1.0) {
      throw Error(ErrorKind::parameter,
                  "angular profile diverges at rho = 1 for alpha <= 1");
    }
    // Gauss summation of ₂F₁ at z = 1
    return std::exp(std::lgamma(0.5 * N) + std::lgamma(alpha - 1.0) - std::lgamma(0.5 * alpha) -
                    std::lgamma(0.5 * (N + alpha - 2)));
  }
  return std::pow(rho, alpha - N) * sphere_mean(N, alpha, 1.0 / rho);
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double angular_profile(const ProblemParams& params, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorKind::parameter, "angular profile needs rho > 0");
  }
  return params.c_riesz * sphere_mean(params.N, params.alpha, rho);
}

struct RieszOperator::FftState {
  struct FreeReal {
    void operator()(double* p) const { fftw_free(p); }
  };
  struct FreeComplex {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  struct DestroyPlan {
    void operator()(fftw_plan_s* p) const {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(p);
    }
  };
  using RealBuffer = std::unique_ptr<double[], FreeReal>;
  using ComplexBuffer = std::unique_ptr<fftw_complex[], FreeComplex>;
  using Plan = std::unique_ptr<fftw_plan_s, DestroyPlan>;

  static RealBuffer real_buffer(int m) { return RealBuffer(fftw_alloc_real(m)); }
  static ComplexBuffer complex_buffer(int m) { return ComplexBuffer(fftw_alloc_complex(m)); }

  int padded = 0;
  std::vector<std::complex<double>> spectrum;
  Plan forward, backward;

  FftState(std::span<const double> kernel) {
    const int n = static_cast<int>(kernel.size());
    padded = 2 * n;
    const int bins = padded / 2 + 1;
    auto real = real_buffer(padded);
    auto freq = complex_buffer(bins);
    {
      std::lock_guard lock(fftw_planner_mutex());
      forward.reset(fftw_plan_dft_r2c_1d(padded, real.get(), freq.get(), FFTW_ESTIMATE));
      backward.reset(fftw_plan_dft_c2r_1d(padded, freq.get(), real.get(), FFTW_ESTIMATE));
    }
    if (!forward || !backward) throw Error(ErrorKind::numeric, "FFTW planning failed");

    std::fill(real.get(), real.get() + padded, 0.0);
    real[0] = kernel[0];
    for (int k = 1; k < n; ++k) real[k] = real[padded - k] = kernel[k];
    fftw_execute_dft_r2c(forward.get(), real.get(), freq.get());
    spectrum.resize(bins);
    for (int b = 0; b < bins; ++b) spectrum[b] = {freq[b][0], freq[b][1]};
  }
};

RieszOperator::RieszOperator(const ProblemParams& params, GridPtr grid)
    : params_(params), grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorKind::configuration, "Riesz operator without grid");
  if (grid_->dimension() != params_.N) {
    throw Error(ErrorKind::dimension, "grid dimension does not match N");
  }
  if (reduced_accuracy()) {
    warn("alpha <= 1: Riesz kernel diagonal handled by moment correction (reduced accuracy)");
  }

  const int n = grid_->size();
  const double h = grid_->h();
  const double decay = 0.5 * (params_.N - params_.alpha);
  const double scale = params_.omega * h;

  // Far-field tail: beyond kh = 20, A(e^{-kh}) = c_riesz to double precision.
  const int explicit_terms = std::max(n - 1, static_cast<int>(std::ceil(20.0 / h)));
  std::vector<double> w(explicit_terms + 1, 0.0);
  for (int k = 1; k <= explicit_terms; ++k) {
    w[k] = scale * angular_profile(params_, std::exp(-k * h)) * std::exp(-decay * k * h);
  }
  const double q = std::exp(-decay * h);
  long double off_diagonal =
      scale * params_.c_riesz * std::pow(q, explicit_terms + 1) / (1.0 - q);
  for (int k = explicit_terms; k >= 1; --k) off_diagonal += w[k];
  const double target =
      riesz_mellin_multiplier(params_.N, params_.alpha, 0.5 * (params_.N + params_.alpha));
  w[0] = static_cast<double>(target - 2.0L * off_diagonal);

  kernel_.assign(w.begin(), w.begin() + n);
  fft_ = std::make_unique<FftState>(kernel_);
}

RieszOperator::~RieszOperator() = default;
RieszOperator::RieszOperator(RieszOperator&&) noexcept = default;
RieszOperator& RieszOperator::operator=(RieszOperator&&) noexcept = default;

void RieszOperator::convolve_dense(std::span<const double> y, std::span<double> out) const {
  const int n = grid_->size();
  const double* W = kernel_.data();
  auto rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += W[std::abs(i - j)] * y[j];
      out[i] = s;
    }
  };
  const unsigned threads = std::min(std::thread::hardware_concurrency(), 16u);
  if (n < 2048 || threads <= 1) {
    rows(0, n);
    return;
  }
  // each row keeps its own fixed summation order, so the result does not
  // depend on the thread count
  std::vector<std::jthread> pool;
  const int chunk = (n + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int b = 0; b < n; b += chunk) pool.emplace_back(rows, b, std::min(n, b + chunk));
}

void RieszOperator::convolve_fft(std::span<const double> y, std::span<double> out) const {
  const int n = grid_->size();
  const int m = fft_->padded;
  const int bins = m / 2 + 1;
  auto real = FftState::real_buffer(m);
  auto freq = FftState::complex_buffer(bins);
  std::copy(y.begin(), y.end(), real.get());
  std::fill(real.get() + n, real.get() + m, 0.0);
  fftw_execute_dft_r2c(fft_->forward.get(), real.get(), freq.get());
  for (int b = 0; b < bins; ++b) {
    const std::complex<double> v = std::complex<double>(freq[b][0], freq[b][1]) * fft_->spectrum[b];
    freq[b][0] = v.real();
    freq[b][1] = v.imag();
  }
  fftw_execute_dft_c2r(fft_->backward.get(), freq.get(), real.get());
  const double inv = 1.0 / m;
  for (int i = 0; i < n; ++i) out[i] = real[i] * inv;
}

void RieszOperator::convolve(std::span<const double> x, std::span<double> out,
                             RieszPath path) const {
  const int n = grid_->size();
  if (static_cast<int>(x.size()) != n || static_cast<int>(out.size()) != n) {
    throw Error(ErrorKind::dimension, "convolution input does not match the grid");
  }
  std::vector<double> y(x.begin(), x.end());
  y.front() *= 0.5;
  y.back() *= 0.5;
  if (path == RieszPath::automatic) path = n < 256 ? RieszPath::dense : RieszPath::fft;
  if (path == RieszPath::dense) {
    convolve_dense(y, out);
  } else {
    convolve_fft(y, out);
  }
}

std::vector<double> RieszOperator::convolve(std::span<const double> x, RieszPath path) const {
  std::vector<double> out(x.size());
  convolve(x, out, path);
  return out;
}

RadialField RieszOperator::apply_with(const RadialField& f, RieszPath path) const {
  if (!f.grid().same_as(*grid_)) throw Error(ErrorKind::dimension, "field grid differs from operator grid");
  const double in_exp = 0.5 * (params_.N + params_.alpha);
  const double out_exp = 0.5 * (params_.N - params_.alpha);
  const auto x = exp_weighted(f, in_exp);
  const auto g = convolve(x, path);
  return from_exp_weighted(grid_, g, out_exp);
}

RadialField RieszOperator::apply_dense(const RadialField& f) const {
  return apply_with(f, RieszPath::dense);
}

RadialField RieszOperator::apply_fft(const RadialField& f) const {
  return apply_with(f, RieszPath::fft);
}

RadialField RieszOperator::apply(const RadialField& f) const {
  return apply_with(f, RieszPath::automatic);
}

std::vector<double> RieszOperator::dense_matrix() const {
  const int n = grid_->size();
  const double in_exp = 0.5 * (params_.N + params_.alpha);
  const double out_exp = 0.5 * (params_.N - params_.alpha);
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double row = std::exp(-out_exp * grid_->t(i));
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i) * n + j] =
          row * kernel_[std::abs(i - j)] * grid_->tau(j) * std::exp(in_exp * grid_->t(j));
    }
  }
  return m;
}

double RieszOperator::hls_pairing(const RadialField& f, const RadialField& g, bool normalized,
                                  RieszPath path) const {
  require_same_grid(f, g);
  if (!f.grid().same_as(*grid_)) throw Error(ErrorKind::dimension, "field grid differs from operator grid");
  const double in_exp = 0.5 * (params_.N + params_.alpha);
  const auto xf = exp_weighted(f, in_exp);
  const auto xg = exp_weighted(g, in_exp);
  const auto conv = convolve(xf, path);
  double s = 0.0;
  for (int i = 0; i < grid_->size(); ++i) s += grid_->tau(i) * xg[i] * conv[i];
  s *= params_.omega * grid_->h();
  return normalized ? s : s / params_.c_riesz;
}

}  // namespace hclab
