#include "hclab/functionals.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>

#include "hclab/errors.hpp"

namespace hclab {

namespace {

// ω h (Σ_k (Gφ)_k² + m² Σ_i τ_i φ_i²) + ω m (φ_0² + φ_{n-1}²), G the
// midpoint derivative. The last term is the
// exact energy of the decaying continuation φ_0 e^{m(t - t_0)} beyond each end,
// which also makes φ' = ±mφ the natural boundary condition of the minimizer.
double scaled_phi(const ProblemParams& p, const LogGrid& g, std::span<const double> phi,
                  bool check_tail) {
  const auto d = midpoint_derivative(phi, g.h());
  const double m = p.mass();
  const int n = g.size();
  double body = 0.0;
  for (double x : d) body += x * x;
  for (int i = 0; i < n; ++i) body += g.tau(i) * m * m * phi[i] * phi[i];
  body *= g.h();
  const double tail = m * (phi[0] * phi[0] + phi[n - 1] * phi[n - 1]);
  if (check_tail && tail > 1e-4 * (body + tail)) {
    std::ostringstream os;
    os << "field not decayed at the window ends: the extrapolated tails carry "
       << tail / (body + tail) << " of the energy";
    warn(os.str());
  }
  return p.omega * (body + tail);
}

}  // namespace

struct ScaledEnergy::Factor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::VectorXd tau;
};

ScaledEnergy::ScaledEnergy(const ProblemParams& params, const RieszOperator& op)
    : params_(params), op_(&op), factor_(std::make_unique<Factor>()) {
  const auto& g = op.grid();
  if (g.dimension() != params.N || op.params().alpha != params.alpha) {
    throw Error(ErrorKind::dimension, "Riesz operator built for different (N, alpha)");
  }
  const int n = g.size();
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : midpoint_derivative_entries(n, g.h())) trip.emplace_back(e.row, e.col, e.value);
  Eigen::SparseMatrix<double> G(n - 1, n);
  G.setFromTriplets(trip.begin(), trip.end());

  factor_->tau.resize(n);
  for (int i = 0; i < n; ++i) factor_->tau[i] = g.tau(i);
  Eigen::SparseMatrix<double> T(n, n);
  T.reserve(Eigen::VectorXi::Constant(n, 1));
  for (int i = 0; i < n; ++i) T.insert(i, i) = g.tau(i);

  const double m = params.mass();
  Eigen::SparseMatrix<double> S = Eigen::SparseMatrix<double>(G.transpose()) * G;
  S += m * m * T;
  S.coeffRef(0, 0) += m / g.h();
  S.coeffRef(n - 1, n - 1) += m / g.h();
  factor_->ldlt.compute(S);
  if (factor_->ldlt.info() != Eigen::Success) {
    throw Error(ErrorKind::numeric, "energy operator factorization failed");
  }
}

ScaledEnergy::~ScaledEnergy() = default;
ScaledEnergy::ScaledEnergy(ScaledEnergy&&) noexcept = default;

std::vector<double> ScaledEnergy::to_scaled(const RadialField& u) const {
  if (!u.grid().same_as(grid())) throw Error(ErrorKind::dimension, "field grid differs from operator grid");
  return exp_weighted(u, params_.kappa());
}

RadialField ScaledEnergy::from_scaled(std::span<const double> phi) const {
  return from_exp_weighted(op_->grid_ptr(), phi, params_.kappa());
}

double ScaledEnergy::phi(std::span<const double> phi) const {
  return scaled_phi(params_, grid(), phi, false);
}

std::vector<double> ScaledEnergy::potential(std::span<const double> phi) const {
  std::vector<double> x(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) x[i] = std::pow(std::abs(phi[i]), params_.pbar);
  return op_->convolve(x);
}

double ScaledEnergy::dterm(std::span<const double> phi, std::span<const double> potential) const {
  const auto& g = grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    s += g.tau(i) * potential[i] * std::pow(std::abs(phi[i]), params_.pbar);
  }
  return params_.omega * g.h() * s;
}

std::vector<double> ScaledEnergy::apply_operator(std::span<const double> phi) const {
  const auto& g = grid();
  const int n = g.size();
  auto out = midpoint_derivative_transpose(midpoint_derivative(phi, g.h()), g.h());
  const double m = params_.mass();
  for (int i = 0; i < n; ++i) out[i] = out[i] / g.tau(i) + m * m * phi[i];
  out[0] += 2.0 * m / g.h() * phi[0];
  out[n - 1] += 2.0 * m / g.h() * phi[n - 1];
  return out;
}

std::vector<double> ScaledEnergy::residual(std::span<const double> phi,
                                           std::span<const double> potential,
                                           double multiplier) const {
  auto r = apply_operator(phi);
  const double q = params_.pbar - 2.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] -= multiplier * potential[i] * std::pow(std::abs(phi[i]), q) * phi[i];
  }
  return r;
}

std::vector<double> ScaledEnergy::solve_operator(std::span<const double> rhs) const {
  const int n = static_cast<int>(rhs.size());
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = factor_->tau[i] * rhs[i];
  const Eigen::VectorXd x = factor_->ldlt.solve(b);
  return std::vector<double>(x.data(), x.data() + n);
}

double ScaledEnergy::relative_residual_norm(std::span<const double> phi,
                                            std::span<const double> residual,
                                            std::optional<IndexWindow> window) const {
  const auto& g = grid();
  const IndexWindow w = window.value_or(IndexWindow{0, g.size()});
  auto lap = apply_operator(phi);  // (-Δu) in scaled form is Lφ + θφ
  double num = 0.0, den = 0.0;
  for (int i = w.begin; i < w.end; ++i) {
    const double weight = g.tau(i) * std::exp(-2.0 * g.t(i));
    const double l = lap[i] + params_.theta * phi[i];
    num += weight * residual[i] * residual[i];
    den += weight * l * l;
  }
  if (den == 0.0) throw Error(ErrorKind::degenerate, "residual normalization: -Δu vanishes");
  return std::sqrt(num / den);
}

double phi(const ProblemParams& params, const RadialField& u) {
  if (u.grid().dimension() != params.N) throw Error(ErrorKind::dimension, "grid dimension does not match N");
  const auto s = exp_weighted(u, params.kappa());
  return scaled_phi(params, u.grid(), s, true);
}

double dterm(const ProblemParams& params, const RieszOperator& op, const RadialField& u) {
  const ScaledEnergy e(params, op);
  const auto s = e.to_scaled(u);
  const double d = e.dterm(s, e.potential(s));
  if (!std::isfinite(d)) {
    throw Error(ErrorKind::numeric, "nonlocal term overflowed; rescale the field toward unit amplitude");
  }
  return d;
}

EnergyReport rayleigh(const ProblemParams& params, const RieszOperator& op, const RadialField& u) {
  const ScaledEnergy e(params, op);
  const auto s = e.to_scaled(u);
  const auto pot = e.potential(s);
  EnergyReport rep;
  rep.phi = e.phi(s);
  rep.dterm = e.dterm(s, pot);
  if (!std::isfinite(rep.dterm)) {
    throw Error(ErrorKind::numeric, "nonlocal term overflowed; rescale the field toward unit amplitude");
  }
  if (!(rep.dterm > 0.0)) throw Error(ErrorKind::degenerate, "Rayleigh quotient of a field with D(u) = 0");
  rep.rayleigh = rep.phi / std::pow(rep.dterm, 1.0 / params.pbar);
  const auto res = e.residual(s, pot, rep.phi / rep.dterm);
  rep.el_residual_norm = e.relative_residual_norm(s, res);
  return rep;
}

std::vector<double> rayleigh_gradient(const ProblemParams& params, const RieszOperator& op,
                                      const RadialField& u) {
  const ScaledEnergy e(params, op);
  const auto& g = op.grid();
  const auto s = e.to_scaled(u);
  const auto pot = e.potential(s);
  const double p = e.phi(s), d = e.dterm(s, pot);
  if (!(d > 0.0)) throw Error(ErrorKind::degenerate, "Rayleigh quotient of a field with D(u) = 0");
  auto grad = e.residual(s, pot, p / d);
  const double scale = 2.0 * params.omega * g.h() * std::pow(d, -1.0 / params.pbar);
  for (int i = 0; i < g.size(); ++i) {
    grad[i] *= scale * g.tau(i) * std::exp(params.kappa() * g.t(i));
  }
  return grad;
}

Residual el_residual(const ProblemParams& params, const RieszOperator& op, const RadialField& u,
                     std::optional<double> multiplier, std::optional<IndexWindow> window) {
  const ScaledEnergy e(params, op);
  const auto s = e.to_scaled(u);
  const auto pot = e.potential(s);
  double lambda = 0.0;
  if (multiplier) {
    lambda = *multiplier;
  } else {
    const double d = e.dterm(s, pot);
    if (!(d > 0.0)) throw Error(ErrorKind::degenerate, "residual of a field with D(u) = 0");
    lambda = e.phi(s) / d;
  }
  const auto res = e.residual(s, pot, lambda);
  const double rel = e.relative_residual_norm(s, res, window);
  // R = e^{-(2+κ)t} ρ
  return Residual{from_exp_weighted(op.grid_ptr(), res, 2.0 + params.kappa()), rel, lambda};
}

RadialField rescale_to_solution(const ProblemParams& params, const RieszOperator& op,
                                const RadialField& u, double s_theta) {
  const double d = dterm(params, op, u);
  if (std::abs(d - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "rescale_to_solution needs D(u) = 1, got " << d;
    throw Error(ErrorKind::precondition, os.str());
  }
  const double c = std::pow(s_theta, 1.0 / (2.0 * params.pbar - 2.0));
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= c;
  return RadialField(u.grid_ptr(), std::move(v));
}

}  // namespace hclab
