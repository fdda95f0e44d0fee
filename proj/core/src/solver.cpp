#include "hclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "hclab/errors.hpp"
#include "hclab/functionals.hpp"

namespace hclab {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::concentration_alarm: return "concentration_alarm";
  }
  return "unknown";
}

RadialField default_init(const ProblemParams& params, GridPtr grid) {
  // In t: φ = e^{mt}(1 + e^{2mt/κ})^{-κ}, even in t. Evaluated in log form so
  // neither factor overflows at the window ends.
  const double k = params.kappa(), m = params.mass();
  std::vector<double> phi(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double t = grid->t(i);
    const double a = 2.0 * m * t / k;
    const double log1p_e = a > 0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
    phi[i] = std::exp(m * t - k * log1p_e);
  }
  return from_exp_weighted(grid, phi, k);
}

RadialField random_init(const ProblemParams& params, GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.3, 0.3), center(-4.0, 4.0), width(0.5, 3.0);
  struct Mode { double a, c, w; };
  std::vector<Mode> modes(4);
  for (auto& md : modes) md = {amp(rng), center(rng), width(rng)};
  const auto base = default_init(params, grid);
  std::vector<double> v(base.values().begin(), base.values().end());
  for (int i = 0; i < grid->size(); ++i) {
    double s = 0.0;
    for (const auto& md : modes) {
      const double z = (grid->t(i) - md.c) / md.w;
      s += md.a * std::exp(-0.5 * z * z);
    }
    v[i] *= std::exp(s);
  }
  return RadialField(std::move(grid), std::move(v));
}

int gauge_shift(std::span<const double> phi) {
  const int n = static_cast<int>(phi.size());
  const int i = static_cast<int>(std::max_element(phi.begin(), phi.end()) - phi.begin());
  double peak = i;
  if (i > 0 && i < n - 1) {
    const double curv = phi[i - 1] - 2.0 * phi[i] + phi[i + 1];
    if (curv < 0.0) peak += 0.5 * (phi[i - 1] - phi[i + 1]) / curv;
  }
  const double center = 0.5 * (n - 1);
  const int limit = (n - 1) / 4;
  return std::clamp(static_cast<int>(std::trunc(center - peak)), -limit, limit);
}

namespace {

struct Iterate {
  std::vector<double> phi, pot, rho;
  double energy = 0.0, dterm = 0.0, rayleigh = 0.0, residual = 0.0;
};

Iterate evaluate(const ScaledEnergy& e, std::vector<double> phi) {
  Iterate it;
  it.phi = std::move(phi);
  it.pot = e.potential(it.phi);
  it.energy = e.phi(it.phi);
  it.dterm = e.dterm(it.phi, it.pot);
  if (!(it.dterm > 0.0) || !std::isfinite(it.dterm)) {
    it.rayleigh = std::numeric_limits<double>::infinity();
    return it;
  }
  it.rayleigh = it.energy / std::pow(it.dterm, 1.0 / e.params().pbar);
  it.rho = e.residual(it.phi, it.pot, it.energy / it.dterm);
  it.residual = e.relative_residual_norm(it.phi, it.rho);
  return it;
}

// φ -> cφ with c = D^{-1/(2p̄)}, updating every cached quantity by homogeneity.
void normalize(Iterate& it, double pbar) {
  const double c = std::pow(it.dterm, -0.5 / pbar);
  const double cp = std::pow(c, pbar);
  for (auto& x : it.phi) x *= c;
  for (auto& x : it.pot) x *= cp;
  for (auto& x : it.rho) x *= c;
  it.energy *= c * c;
  it.dterm = 1.0;
}

std::vector<double> clipped_step(std::span<const double> phi, std::span<const double> d, double s) {
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] = std::max(0.0, phi[i] - s * d[i]);
  return out;
}

CompactnessDiag diag_from_scaled(const ScaledEnergy& e, std::span<const double> phi,
                                 std::span<const double> pot) {
  const auto& g = e.grid();
  const auto& p = e.params();
  const int n = g.size();
  const auto d = midpoint_derivative(phi, g.h());
  const double m = p.mass();
  std::vector<double> mu(n), nu(n);
  for (int i = 0; i < n; ++i) {
    mu[i] = g.tau(i) * m * m * phi[i] * phi[i];
    nu[i] = g.tau(i) * pot[i] * std::pow(std::abs(phi[i]), p.pbar);
  }
  // each cell's gradient energy is shared by its two nodes
  for (int k = 0; k < n - 1; ++k) {
    mu[k] += 0.5 * d[k] * d[k];
    mu[k + 1] += 0.5 * d[k] * d[k];
  }
  // The extrapolated tails belong to the end regions.
  mu[0] += m * phi[0] * phi[0] / g.h();
  mu[n - 1] += m * phi[n - 1] * phi[n - 1] / g.h();

  const auto inner = fraction_window(g, 0.0, 0.1);
  const auto outer = fraction_window(g, 0.9, 1.0);
  auto fractions = [&](const std::vector<double>& f) {
    double total = 0.0, lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
      total += f[i];
      if (i >= inner.begin && i < inner.end) lo += f[i];
      if (i >= outer.begin && i < outer.end) hi += f[i];
    }
    if (!(total > 0.0)) return std::pair{0.0, 0.0};
    return std::pair{std::clamp(lo / total, 0.0, 1.0), std::clamp(hi / total, 0.0, 1.0)};
  };
  CompactnessDiag diag;
  std::tie(diag.inner_energy_frac, diag.outer_energy_frac) = fractions(mu);
  std::tie(diag.inner_nu_frac, diag.outer_nu_frac) = fractions(nu);
  return diag;
}

void validate(const SolveOptions& opts) {
  if (!(opts.step > 0.0) || !std::isfinite(opts.step)) throw Error(ErrorKind::parameter, "solver step must be > 0");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::parameter, "solver tol must be > 0");
  if (opts.max_iter < 1) throw Error(ErrorKind::parameter, "solver max_iter must be >= 1");
  if (opts.continuation_steps < 0) throw Error(ErrorKind::parameter, "continuation_steps must be >= 0");
  if (!(opts.concentration_alarm > 0.0 && opts.concentration_alarm <= 1.0)) {
    throw Error(ErrorKind::parameter, "concentration_alarm must lie in (0, 1]");
  }
}

}  // namespace

CompactnessDiag monitor(const ProblemParams& params, const RieszOperator& op, const RadialField& u) {
  const ScaledEnergy e(params, op);
  const auto phi = e.to_scaled(u);
  return diag_from_scaled(e, phi, e.potential(phi));
}

SolveResult minimize(const ProblemParams& params, const RieszOperator& op, const RadialField& init,
                     const SolveOptions& opts) {
  validate(opts);
  for (double x : init.values()) {
    if (x < 0.0) throw Error(ErrorKind::precondition, "initial field must be nonnegative");
  }
  const ScaledEnergy e(params, op);
  const auto& g = e.grid();
  const double pbar = params.pbar;

  Iterate cur = evaluate(e, e.to_scaled(init));
  if (!(cur.dterm > 0.0)) throw Error(ErrorKind::degenerate, "initial field has D(u) = 0");
  normalize(cur, pbar);

  constexpr double armijo = 1e-4;
  const double min_step = 1e-12 * opts.step;

  SolveResult res(RadialField::zeros(init.grid_ptr()));
  res.theta = params.theta;
  for (int iter = 0;; ++iter) {
    res.trace.push_back({iter, cur.rayleigh, cur.residual});
    res.diag = diag_from_scaled(e, cur.phi, cur.pot);
    if (cur.residual <= opts.tol) {
      res.status = SolveStatus::converged;
      break;
    }
    if (std::max(res.diag.inner_energy_frac, res.diag.outer_energy_frac) > opts.concentration_alarm) {
      res.status = SolveStatus::concentration_alarm;
      break;
    }
    if (iter + 1 >= opts.max_iter) {
      res.status = SolveStatus::max_iterations;
      break;
    }

    // Sobolev direction and the slope of the quotient along it (D = 1 here).
    const auto d = e.solve_operator(cur.rho);
    double slope = 0.0;
    for (int i = 0; i < g.size(); ++i) slope += g.tau(i) * cur.rho[i] * d[i];
    slope *= 2.0 * params.omega * g.h();

    bool accepted = false;
    Iterate next;
    for (double s = opts.step; s >= min_step; s *= 0.5) {
      next = evaluate(e, clipped_step(cur.phi, d, s));
      if (!std::isfinite(next.rayleigh)) continue;
      const double drop = armijo * s * slope;
      // Below ~1e-14 relative the quotient is at roundoff; accept a step that
      // does not raise it and still lowers the residual.
      const bool sufficient = next.rayleigh <= cur.rayleigh - drop;
      const bool roundoff = drop < 1e-14 * cur.rayleigh && next.rayleigh <= cur.rayleigh &&
                            next.residual < cur.residual;
      if (sufficient || roundoff) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = SolveStatus::stalled;
      break;
    }
    normalize(next, pbar);

    if (opts.gauge) {
      const int k = gauge_shift(next.phi);
      if (k != 0) {
        Iterate moved = evaluate(e, shift_values(next.phi, k));
        if (std::isfinite(moved.rayleigh) && moved.rayleigh <= next.rayleigh) {
          normalize(moved, pbar);
          next = std::move(moved);
        }
      }
    }
    cur = std::move(next);
    ++res.iterations;
  }

  res.field = e.from_scaled(cur.phi);
  res.s_theta = cur.energy;
  res.residual = cur.residual;
  return res;
}

std::vector<SolveResult> continuation(const ProblemParams& target, const OperatorFactory& op_factory,
                                      GridPtr grid, const SolveOptions& opts) {
  validate(opts);
  const int steps = opts.continuation_steps;
  std::vector<SolveResult> legs;
  std::shared_ptr<const RieszOperator> op;
  for (int j = 0; j <= steps; ++j) {
    const double theta = steps == 0 ? target.theta : target.theta * j / steps;
    const auto p = make_params(target.N, target.alpha, theta);
    // The operator only depends on (N, α, grid); one instance serves every leg.
    if (!op) op = op_factory(p);
    if (!op->grid().same_as(*grid)) throw Error(ErrorKind::dimension, "operator grid differs from solve grid");
    const RadialField init = legs.empty() ? default_init(p, grid) : legs.back().field;
    legs.push_back(minimize(p, *op, init, opts));
    if (!legs.back().converged()) break;
  }
  return legs;
}

}  // namespace hclab
