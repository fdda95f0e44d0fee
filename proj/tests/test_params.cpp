#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hclab/errors.hpp"
#include "hclab/params.hpp"
#include "support.hpp"

using namespace hclab;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

big pi50() { return boost::math::constants::pi<big>(); }
big tgamma50(big x) { return boost::math::tgamma(x); }

double hls_oracle(int N, double a) {
  const big n = N, al = a;
  const big v = pow(pi50(), (n - al) / 2) * tgamma50(al / 2) / tgamma50((n + al) / 2) *
                pow(tgamma50(n / 2) / tgamma50(n), -al / n);
  return static_cast<double>(v);
}

double riesz_oracle(int N, double a) {
  const big n = N, al = a;
  return static_cast<double>(tgamma50((n - al) / 2) / (tgamma50(al / 2) * pow(pi50(), n / 2) * pow(big(2), al)));
}

double mellin_oracle(int N, double a, double s) {
  const big n = N, al = a, ss = s;
  return static_cast<double>(pow(big(2), -al) * tgamma50((n - ss) / 2) * tgamma50((ss - al) / 2) /
                             (tgamma50(ss / 2) * tgamma50((n - ss + al) / 2)));
}

struct Case {
  int N;
  double alpha;
};
const Case cases[] = {{3, 2.0}, {3, 0.6}, {3, 1.5}, {3, 2.9}, {4, 1.0}, {4, 3.5}, {5, 1.5}, {6, 4.0}, {7, 5.5}};

}  // namespace

TEST_CASE("sharp HLS constant against a 50-digit Gamma oracle") {
  for (auto c : cases) {
    CAPTURE(c.N);
    CAPTURE(c.alpha);
    CHECK(test::rel(sharp_hls_constant(c.N, c.alpha), hls_oracle(c.N, c.alpha)) < 1e-13);
  }
  // the value quoted for N = 3, α = 2
  CHECK(sharp_hls_constant(3, 2.0) == doctest::Approx(2.29399).epsilon(2e-5));
}

TEST_CASE("Riesz normalization and sphere area") {
  for (auto c : cases) {
    CHECK(test::rel(riesz_normalization(c.N, c.alpha), riesz_oracle(c.N, c.alpha)) < 1e-13);
  }
  // Newtonian kernel in R³: 1/(4π|x|)
  CHECK(riesz_normalization(3, 2.0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("Mellin multiplier against the Gamma oracle") {
  for (auto c : cases) {
    for (double f : {0.1, 0.5, 0.9}) {
      const double s = c.alpha + f * (c.N - c.alpha);
      CHECK(test::rel(riesz_mellin_multiplier(c.N, c.alpha, s), mellin_oracle(c.N, c.alpha, s)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(riesz_mellin_multiplier(3, 2.0, 2.0), Error);
  CHECK_THROWS_AS(riesz_mellin_multiplier(3, 2.0, 3.0), Error);
}

TEST_CASE("derived exponents") {
  const auto p = make_params(3, 2.0, 0.16);
  CHECK(p.pbar == 5.0);
  CHECK(p.beta == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.mass() == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(p.outer_exponent() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(make_params(5, 3.0, 0.0).pbar == doctest::Approx(8.0 / 3.0));
  CHECK(make_params(4, 1.0, 0.0).beta == 0.0);
}

TEST_CASE("beta solves (N-2)beta - beta^2 = theta over the admissible range") {
  std::mt19937_64 rng(3);
  for (int N = 3; N <= 8; ++N) {
    const double hardy = 0.25 * (N - 2) * (N - 2);
    std::uniform_real_distribution<double> th(0.0, hardy);
    for (int k = 0; k < 50; ++k) {
      const double theta = th(rng) * (1 - 1e-9);
      const auto p = make_params(N, std::max(0.5, N - 3.5), theta);
      CHECK(std::abs((N - 2) * p.beta - p.beta * p.beta - theta) <= 1e-14 * std::max(1.0, hardy));
      CHECK(p.beta >= 0.0);
      CHECK(p.beta <= 0.5 * (N - 2));
    }
  }
}

TEST_CASE("parameter validation names the violated bound") {
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parameter);
      return std::string(e.what());
    }
    return std::string("no throw");
  };
  CHECK(message([] { make_params(3, 2.0, 0.3); }).find("(N-2)^2/4") != std::string::npos);
  CHECK(message([] { make_params(3, 2.0, -0.1); }).find("theta") != std::string::npos);
  CHECK(message([] { make_params(2, 1.0, 0.0); }).find("N >= 3") != std::string::npos);
  CHECK(message([] { make_params(6, 2.0, 0.0); }).find("(N-4)_+") != std::string::npos);
  CHECK(message([] { make_params(3, 3.0, 0.0); }).find("alpha < N") != std::string::npos);
  CHECK_THROWS_AS(make_params(3, std::nan(""), 0.0), Error);
  CHECK_NOTHROW(make_params(3, 2.0, 0.2499));
  CHECK_NOTHROW(make_params(5, 1.01, 0.0));
}
