#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <random>

#include "hclab/errors.hpp"
#include "hclab/riesz.hpp"
#include "hclab/verify.hpp"
#include "support.hpp"

using namespace hclab;

namespace {

// Sphere average of c|x-y|^{α-N}, |x| = 1, |y| = ρ, by direct quadrature in the polar angle.
double profile_by_quadrature(int N, double alpha, double rho) {
  const double c = riesz_normalization(N, alpha) * boost::math::tgamma(0.5 * N) /
                   (std::sqrt(M_PI) * boost::math::tgamma(0.5 * (N - 1)));
  auto f = [&](double phi) {
    return std::pow(1 + rho * rho - 2 * rho * std::cos(phi), 0.5 * (alpha - N)) * std::pow(std::sin(phi), N - 2);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return c * ts.integrate(f, 0.0, M_PI);
}

// N = 3 closed form of the same average.
double profile_n3(double alpha, double rho) {
  return riesz_normalization(3, alpha) *
         (std::pow(1 + rho, alpha - 1) - std::pow(std::abs(1 - rho), alpha - 1)) / (2 * rho * (alpha - 1));
}

double l2_rel(const RadialField& a, const RadialField& b) {
  double num = 0, den = 0;
  for (int i = 0; i < a.size(); ++i) {
    const double w = a.grid().weight(i);
    num += w * (a[i] - b[i]) * (a[i] - b[i]);
    den += w * b[i] * b[i];
  }
  return std::sqrt(num / den);
}

RadialField smoothed_ball(const GridPtr& grid) {
  const double sigma = 1.5 * grid->h();
  return RadialField::sample(grid, [&](double r) { return 0.5 * std::erfc(std::log(r) / sigma); });
}

}  // namespace

TEST_CASE("angular profile: closed forms") {
  const auto p = make_params(3, 2.0, 0.0);
  CHECK(angular_profile(p, 0.5) == doctest::Approx(1 / (4 * M_PI)).epsilon(1e-13));
  CHECK(angular_profile(p, 2.0) == doctest::Approx(1 / (8 * M_PI)).epsilon(1e-13));
  CHECK(angular_profile(p, 1.0) == doctest::Approx(1 / (4 * M_PI)).epsilon(1e-13));
  CHECK(angular_profile(p, 1e-6) == doctest::Approx(p.c_riesz).epsilon(1e-10));
  CHECK_THROWS_AS(angular_profile(p, 0.0), Error);
  CHECK_THROWS_AS(angular_profile(p, -1.0), Error);
  CHECK_THROWS_AS(angular_profile(make_params(3, 1.0, 0.0), 1.0), Error);

  for (double alpha : {0.7, 1.3, 2.0, 2.6}) {
    const auto q = make_params(3, alpha, 0.0);
    for (double rho : {0.05, 0.3, 0.5, 0.51, 0.8, 0.97, 0.999, 1.03, 1.9, 7.0}) {
      CAPTURE(alpha);
      CAPTURE(rho);
      CHECK(test::rel(angular_profile(q, rho), profile_n3(alpha, rho)) < 1e-11);
    }
  }
}

TEST_CASE("angular profile: quadrature oracle in higher dimension") {
  for (auto [N, alpha] : {std::pair{4, 1.5}, {4, 3.0}, {5, 2.0}, {5, 4.5}}) {
    const auto p = make_params(N, alpha, 0.0);
    for (double rho : {0.1, 0.45, 0.6, 0.85, 0.95, 1.2, 3.0}) {
      CAPTURE(N);
      CAPTURE(alpha);
      CAPTURE(rho);
      CHECK(test::rel(angular_profile(p, rho), profile_by_quadrature(N, alpha, rho)) < 1e-9);
    }
  }
}

TEST_CASE("angular profile: reciprocity") {
  for (auto [N, alpha] : {std::pair{3, 2.0}, {3, 1.2}, {4, 2.5}, {5, 1.5}, {6, 3.0}}) {
    const auto p = make_params(N, alpha, 0.0);
    for (double rho : {0.02, 0.3, 0.5, 0.7, 0.93}) {
      CAPTURE(N);
      CAPTURE(rho);
      CHECK(test::rel(angular_profile(p, 1 / rho), std::pow(rho, N - alpha) * angular_profile(p, rho)) < 1e-10);
    }
  }
}

TEST_CASE("dense and FFT paths agree") {
  const auto g = make_symmetric_grid(3, 12.0, 1024);
  const RieszOperator op(make_params(3, 2.0, 0.0), g);
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const auto f = random_bump_field(g, rng);
    worst = std::max(worst, l2_rel(op.apply_fft(f), op.apply_dense(f)));
  }
  CHECK(worst < 1e-8);
  CHECK(worst < 1e-12);  // both paths evaluate the same Toeplitz sum

  const auto z = op.apply(RadialField::zeros(g));
  for (int i = 0; i < g->size(); ++i) REQUIRE(z[i] == 0.0);
  CHECK_THROWS_AS(op.apply(RadialField::zeros(make_symmetric_grid(3, 12.0, 512))), Error);
}

TEST_CASE("dense matrix reproduces apply") {
  const auto g = make_symmetric_grid(4, 8.0, 64);
  const RieszOperator op(make_params(4, 1.5, 0.0), g);
  const auto f = gaussian_bump(g, 0.3, 1.0);
  const auto m = op.dense_matrix();
  const auto a = op.apply_dense(f);
  for (int i = 0; i < 64; ++i) {
    double s = 0;
    for (int j = 0; j < 64; ++j) s += m[i * 64 + j] * f[j];
    CHECK(s == doctest::Approx(a[i]).epsilon(1e-13));
  }
  // self-adjoint in the dx pairing: w_i M_ij = w_j M_ji
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < i; ++j)
      REQUIRE(g->weight(i) * m[i * 64 + j] == doctest::Approx(g->weight(j) * m[j * 64 + i]).epsilon(1e-13));
}

TEST_CASE("self-adjointness, positivity and pairing symmetry") {
  for (auto [N, alpha] : {std::pair{3, 2.0}, {3, 0.8}, {5, 3.0}}) {
    const auto g = make_symmetric_grid(N, 12.0, 1024);
    const RieszOperator op(make_params(N, alpha, 0.0), g);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
      const auto f = random_bump_field(g, rng), h = random_bump_field(g, rng);
      const double a = op.hls_pairing(f, h), b = op.hls_pairing(h, f);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
      CHECK(op.hls_pairing(f, h, false) == doctest::Approx(a / op.params().c_riesz).epsilon(1e-13));
      const auto If = op.apply(f);
      for (int i = 0; i < g->size(); ++i) REQUIRE(If[i] > 0.0);
    }
  }
}

TEST_CASE("dilation covariance") {
  // f(r) = e^{-(ln r)²} r^{-(N+α)/2} is compact in the balanced variable, so
  // truncation of the window does not enter.
  const auto p = make_params(3, 2.0, 0.0);
  const auto g = make_symmetric_grid(3, 12.0, 2048);
  const RieszOperator op(p, g);
  const auto f = RadialField::sample(g, [](double r) { return std::exp(-std::pow(std::log(r), 2)) * std::pow(r, -2.5); });
  const auto If = op.apply(f);
  for (int k : {-9, 4, 31}) {
    const auto Isf = op.apply(shift(f, k));
    const double lam = std::exp(p.alpha * k * g->h());
    for (int i = 600; i < 1400; ++i) {
      CAPTURE(k);
      REQUIRE(Isf[i] == doctest::Approx(lam * If[i - k]).epsilon(1e-11));
    }
  }
}

TEST_CASE("Newtonian potentials") {
  const auto p = make_params(3, 2.0, 0.0);
  const auto g = make_symmetric_grid(3, 12.0, 2048);
  const RieszOperator op(p, g);

  // I_2 * U^5 = U/3 for U = (1+r²)^{-1/2}
  const auto U5 = RadialField::sample(g, [](double r) { return std::pow(1 + r * r, -2.5); });
  const auto V = op.apply(U5);
  const auto win = fraction_window(*g, 0.1, 0.9);
  for (int i = win.begin; i < win.end; ++i)
    REQUIRE(V[i] == doctest::Approx(1 / (3 * std::sqrt(1 + g->r(i) * g->r(i)))).epsilon(1e-6));

  const auto ball = op.apply(smoothed_ball(g));
  CHECK(test::rel(ball[0], 0.5) < 1e-3);
  const int i2 = static_cast<int>(std::lround((std::log(2.0) - g->t_min()) / g->h()));
  CHECK(test::rel(ball[i2], 1.0 / (3 * g->r(i2))) < 1e-3);
}

TEST_CASE("power laws see the Mellin multiplier") {
  // I_α * r^{-s} = M(s) r^{α-s}; in the window interior the truncation is small.
  const auto p = make_params(3, 1.5, 0.0);
  const auto g = make_symmetric_grid(3, 20.0, 2048);
  const RieszOperator op(p, g);
  const double s = 0.5 * (p.N + p.alpha);
  const auto f = RadialField::sample(g, [&](double r) { return std::pow(r, -s); });
  const auto If = op.apply(f);
  const double M = riesz_mellin_multiplier(3, 1.5, s);
  // the truncated tail ∫_{|t|>L} decays like e^{-(N-α)L/2}
  const int mid = g->size() / 2;
  CHECK(test::rel(If[mid] / std::pow(g->r(mid), p.alpha - s), M) < 1e-3);
}

TEST_CASE("FFT path is faster than dense at large n") {
  const auto g = make_symmetric_grid(3, 12.0, 16384);
  const RieszOperator op(make_params(3, 2.0, 0.0), g);
  const auto f = gaussian_bump(g, 0.0, 2.0);
  using clock = std::chrono::steady_clock;
  auto time = [&](RieszPath path) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = clock::now();
      const auto out = path == RieszPath::fft ? op.apply_fft(f) : op.apply_dense(f);
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
      REQUIRE(out.size() == 16384);
    }
    return best;
  };
  const double dense = time(RieszPath::dense), fft = time(RieszPath::fft);
  MESSAGE("dense " << dense * 1e3 << " ms, fft " << fft * 1e3 << " ms");
  CHECK(dense / fft >= 20.0);
}
