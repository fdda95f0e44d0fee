#include <doctest.h>

#include <cmath>
#include <random>

#include "hclab/errors.hpp"
#include "hclab/loggrid.hpp"
#include "support.hpp"

using namespace hclab;

TEST_CASE("grid construction") {
  const auto g = make_symmetric_grid(3, 12.0, 2048);
  CHECK(g->size() == 2048);
  CHECK(g->symmetric());
  CHECK(g->h() == doctest::Approx(24.0 / 2047).epsilon(1e-15));
  CHECK(g->t(0) == -12.0);
  CHECK(g->t(2047) == 12.0);
  for (int i = 0; i < 2048; ++i) REQUIRE(g->t(i) == -g->t(2047 - i));
  CHECK(g->tau(0) == 0.5);
  CHECK(g->tau(1) == 1.0);
  CHECK(g->tau(2047) == 0.5);
  CHECK(g->weight(5) == doctest::Approx(4 * M_PI * std::exp(3 * g->t(5)) * g->h()).epsilon(1e-14));

  CHECK_FALSE(make_grid(3, -10.0, 12.0, 100)->symmetric());
  CHECK_THROWS_AS(make_grid(3, -1.0, 1.0, 15), Error);
  CHECK_THROWS_AS(make_grid(3, 1.0, -1.0, 100), Error);
  CHECK_THROWS_AS(make_grid(3, -INFINITY, 1.0, 100), Error);
}

TEST_CASE("quadrature of closed-form integrals") {
  const auto g = make_symmetric_grid(3, 12.0, 2048);
  // ∫_{R³} e^{-r²} dx = π^{3/2}
  CHECK(test::rel(integrate(RadialField::sample(g, [](double r) { return std::exp(-r * r); })),
                  std::pow(M_PI, 1.5)) < 1e-12);
  // ∫_{R³} (1+r²)^{-3} dx = π²/4
  CHECK(test::rel(integrate(RadialField::sample(g, [](double r) { return std::pow(1 + r * r, -3.0); })),
                  M_PI * M_PI / 4) < 1e-9);
  // smoothed unit ball: volume 4π/3 up to the smoothing
  const auto ball = RadialField::sample(g, [](double r) { return 0.5 * std::erfc((r - 1.0) / 0.01); });
  CHECK(test::rel(integrate(ball), 4 * M_PI / 3) < 1e-3);
  // N = 5: ∫ e^{-r²} dx = π^{5/2}
  const auto g5 = make_symmetric_grid(5, 12.0, 2048);
  CHECK(test::rel(integrate(RadialField::sample(g5, [](double r) { return std::exp(-r * r); })),
                  std::pow(M_PI, 2.5)) < 1e-12);
}

TEST_CASE("field construction") {
  const auto g = make_symmetric_grid(3, 12.0, 64);
  CHECK_THROWS_AS(RadialField(g, std::vector<double>(63)), Error);
  std::vector<double> bad(64, 1.0);
  bad[3] = NAN;
  CHECK_THROWS_AS(RadialField(g, bad), Error);
  const auto z = RadialField::zeros(g);
  CHECK(integrate(z) == 0.0);
  const auto other = make_symmetric_grid(3, 11.0, 64);
  CHECK_THROWS_AS(require_same_grid(z, RadialField::zeros(other)), Error);
  CHECK_NOTHROW(require_same_grid(z, RadialField::zeros(make_symmetric_grid(3, 12.0, 64))));
}

TEST_CASE("nodal derivative: order, reflection and adjoint") {
  double prev = 0;
  for (int n : {200, 400}) {
    const double h = 2.0 / (n - 1);
    std::vector<double> f(n), exact(n);
    for (int i = 0; i < n; ++i) {
      const double t = -1.0 + i * h;
      f[i] = std::sin(2 * t) + t * t * t;
      exact[i] = 2 * std::cos(2 * t) + 3 * t * t;
    }
    const auto d = t_derivative(f, h);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] - exact[i]));
    CAPTURE(n);
    CHECK(err < 5e-8);
    if (prev > 0) CHECK(prev / err > 14.0);  // fourth order: halving h gains 16
    prev = err;
  }
  // D anticommutes with reflection
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  const int n = 50;
  std::vector<double> v(n), rv(n), w(n);
  for (auto& x : v) x = nd(rng);
  for (auto& x : w) x = nd(rng);
  for (int i = 0; i < n; ++i) rv[i] = v[n - 1 - i];
  const auto dv = t_derivative(v, 0.1), drv = t_derivative(rv, 0.1);
  for (int i = 0; i < n; ++i) CHECK(drv[i] == doctest::Approx(-dv[n - 1 - i]).epsilon(1e-13));
  // transpose is the Euclidean adjoint
  const auto dtw = t_derivative_transpose(w, 0.1);
  double a = 0, b = 0;
  for (int i = 0; i < n; ++i) {
    a += w[i] * dv[i];
    b += dtw[i] * v[i];
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("midpoint derivative") {
  const int n = 300;
  const double h = 0.01;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(0.7 * i * h) + std::sin(3 * i * h);
  const auto d = midpoint_derivative(f, h);
  REQUIRE(d.size() == n - 1);
  double err_in = 0, err_end = 0;
  for (int k = 0; k < n - 1; ++k) {
    const double t = (k + 0.5) * h;
    const double e = std::abs(d[k] - (0.7 * std::exp(0.7 * t) + 3 * std::cos(3 * t)));
    (k == 0 || k == n - 2 ? err_end : err_in) = std::max(k == 0 || k == n - 2 ? err_end : err_in, e);
  }
  CHECK(err_in < 3e-8);
  CHECK(err_end < 5e-6);  // one-sided end cells are third order

  // the alternating mode carries gradient energy, unlike with the nodal stencil
  std::vector<double> alt(n);
  for (int i = 0; i < n; ++i) alt[i] = i % 2 ? 1.0 : -1.0;
  const auto dn = t_derivative(alt, h);
  const auto dm = midpoint_derivative(alt, h);
  CHECK(std::abs(dn[n / 2]) < 1e-12);
  CHECK(std::abs(dm[n / 2]) == doctest::Approx(56.0 / (24 * h)));

  // adjoint and entry list agree with the operator
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> v(n), w(n - 1);
  for (auto& x : v) x = nd(rng);
  for (auto& x : w) x = nd(rng);
  const auto gv = midpoint_derivative(v, h), gtw = midpoint_derivative_transpose(w, h);
  double a = 0, b = 0;
  for (int k = 0; k < n - 1; ++k) a += w[k] * gv[k];
  for (int i = 0; i < n; ++i) b += gtw[i] * v[i];
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  std::vector<double> from_entries(n - 1, 0.0);
  for (const auto& e : midpoint_derivative_entries(n, h)) from_entries[e.row] += e.value * v[e.col];
  for (int k = 0; k < n - 1; ++k) CHECK(from_entries[k] == doctest::Approx(gv[k]).epsilon(1e-13));
}

TEST_CASE("eighth-order derivative") {
  const int n = 400;
  const double h = 0.02;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::exp(-0.5 * std::pow((i - 200) * h, 2));
  const auto d = t_derivative8(f, h);
  double err = 0;
  for (int i = 4; i < n - 4; ++i) {
    const double t = (i - 200) * h;
    err = std::max(err, std::abs(d[i] + t * std::exp(-0.5 * t * t)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("radial derivative") {
  const auto g = make_symmetric_grid(3, 6.0, 1024);
  const auto u = RadialField::sample(g, [](double r) { return 1 / std::sqrt(1 + r * r); });
  const auto du = radial_derivative(u);
  double err = 0;
  for (int i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    err = std::max(err, std::abs(du[i] + r * std::pow(1 + r * r, -1.5)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("shift is a dilation by whole nodes") {
  const auto g = make_symmetric_grid(3, 12.0, 512);
  const auto u = RadialField::sample(g, [](double r) { return std::pow(1 + r * r, -0.5); });
  const int k = 7;
  const auto s = shift(u, k);
  const double lambda = std::exp(-k * g->h());
  // out_i = u(e^{-kh} r_i) on nodes that do not need the fill
  for (int i = k; i < g->size(); ++i) CHECK(s[i] == u[i - k]);
  // fill continues the boundary power law: u ~ 1 at the inner end
  for (int i = 0; i < k; ++i) {
    CHECK(s[i] == doctest::Approx(std::pow(1 + std::pow(lambda * g->r(i), 2), -0.5)).epsilon(1e-9));
  }
  // and u ~ 1/r at the outer end
  const auto s2 = shift(u, -k);
  for (int i = g->size() - k; i < g->size(); ++i) {
    const double r = g->r(i) / lambda;
    CHECK(s2[i] == doctest::Approx(1 / std::sqrt(1 + r * r)).epsilon(1e-6));
  }
  CHECK(shift(shift(u, 5), -5)[200] == u[200]);
  CHECK_THROWS_AS(shift(u, 128), Error);
  CHECK_NOTHROW(shift(u, 127));
  // sign change near an end: constant fill
  std::vector<double> v(512, 1.0);
  v[3] = -1.0;
  const auto sv = shift_values(v, 4);
  CHECK(sv[0] == 1.0);
}

TEST_CASE("reflection and exponential weights") {
  const auto g = make_symmetric_grid(3, 12.0, 128);
  const auto u = RadialField::sample(g, [](double r) { return std::exp(-r); });
  const auto ru = reflect(u);
  for (int i = 0; i < 128; ++i) CHECK(ru[i] == u[127 - i]);
  const auto rru = reflect(ru);
  for (int i = 0; i < 128; ++i) CHECK(rru[i] == u[i]);
  CHECK_THROWS_AS(reflect(RadialField::zeros(make_grid(3, -10, 12, 128))), Error);

  const auto w = exp_weighted(u, 0.5);
  const auto back = from_exp_weighted(g, w, 0.5);
  for (int i = 0; i < 128; ++i) {
    CHECK(w[i] == doctest::Approx(u[i] * std::sqrt(g->r(i))).epsilon(1e-14));
    CHECK(std::abs(back[i] - u[i]) <= 2 * std::numeric_limits<double>::epsilon() * u[i]);
  }
}

TEST_CASE("fraction windows") {
  const auto g = make_symmetric_grid(3, 12.0, 2048);
  const auto w = fraction_window(*g, 0.05, 0.25);
  CHECK(w.begin == 102);
  CHECK(w.end == 512);
  CHECK(w.size() == 410);
  const auto all = fraction_window(*g, -1.0, 2.0);
  CHECK(all.begin == 0);
  CHECK(all.end == 2048);
  const auto empty = fraction_window(*g, 0.6, 0.4);
  CHECK(empty.size() == 0);
}
