#include "hclab/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hclab/errors.hpp"

namespace hclab {

namespace {

constexpr double pi = std::numbers::pi;

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::input, std::string(name) + " must be finite");
  }
}

void require_riesz_order(int N, double alpha) {
  require_finite(alpha, "alpha");
  if (N < 1) throw Error(ErrorKind::parameter, "dimension N must be positive");
  if (!(alpha > 0.0 && alpha < N)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " violates 0 < alpha < N = " << N;
    throw Error(ErrorKind::parameter, os.str());
  }
}

}  // namespace

double sphere_area(int N) {
  return 2.0 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double riesz_normalization(int N, double alpha) {
  require_riesz_order(N, alpha);
  return std::tgamma(0.5 * (N - alpha)) /
         (std::tgamma(0.5 * alpha) * std::pow(pi, 0.5 * N) * std::pow(2.0, alpha));
}

double sharp_hls_constant(int N, double alpha) {
  require_riesz_order(N, alpha);
  // log form keeps Γ(N) finite for large N
  const double log_s = 0.5 * (N - alpha) * std::log(pi) + std::lgamma(0.5 * alpha) -
                       std::lgamma(0.5 * (N + alpha)) -
                       (alpha / N) * (std::lgamma(0.5 * N) - std::lgamma(double(N)));
  return std::exp(log_s);
}

double riesz_mellin_multiplier(int N, double alpha, double s) {
  require_riesz_order(N, alpha);
  if (!(s > alpha && s < N)) {
    throw Error(ErrorKind::parameter, "Mellin exponent must satisfy alpha < s < N");
  }
  const double log_g = -alpha * std::log(2.0) + std::lgamma(0.5 * (N - s)) +
                       std::lgamma(0.5 * (s - alpha)) - std::lgamma(0.5 * s) -
                       std::lgamma(0.5 * (N - s + alpha));
  return std::exp(log_g);
}

ProblemParams make_params(int N, double alpha, double theta) {
  require_finite(alpha, "alpha");
  require_finite(theta, "theta");
  if (N < 3) {
    throw Error(ErrorKind::parameter, "dimension N = " + std::to_string(N) + " violates N >= 3");
  }
  const double alpha_min = std::max(0.0, double(N - 4));
  if (!(alpha > alpha_min && alpha < N)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " violates (N-4)_+ = " << alpha_min << " < alpha < N = " << N;
    throw Error(ErrorKind::parameter, os.str());
  }
  const double hardy = 0.25 * (N - 2) * (N - 2);
  if (!(theta >= 0.0 && theta < hardy)) {
    std::ostringstream os;
    os << "theta = " << theta << " violates 0 <= theta < (N-2)^2/4 = " << hardy;
    throw Error(ErrorKind::parameter, os.str());
  }
  if (alpha < 0.5) {
    std::ostringstream os;
    os << "alpha = " << alpha << " < 0.5: Riesz kernel quadrature is outside its tested range";
    warn(os.str());
  }

  ProblemParams p;
  p.N = N;
  p.alpha = alpha;
  p.theta = theta;
  p.pbar = (N + alpha) / (N - 2);
  // (N-2-√((N-2)²-4θ))/2 written as 2θ/((N-2)+√(...)) to avoid cancellation
  const double root = std::sqrt(double(N - 2) * (N - 2) - 4.0 * theta);
  p.beta = 2.0 * theta / ((N - 2) + root);
  p.omega = sphere_area(N);
  p.c_riesz = riesz_normalization(N, alpha);
  p.s_hls = sharp_hls_constant(N, alpha);
  return p;
}

}  // namespace hclab
