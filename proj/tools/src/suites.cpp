#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include "hclab/cli/commands.hpp"
#include "hclab/errors.hpp"
#include "hclab/functionals.hpp"
#include "hclab/solver.hpp"

namespace hclab::cli {

namespace {

using Inputs = std::vector<std::pair<std::string, double>>;

struct Suite {
  const RunConfig& cfg;
  std::vector<CheckRecord> records;

  // value ≤ tolerance passes.
  void at_most(std::string name, Inputs in, double tol, const std::function<double()>& f) {
    run(std::move(name), std::move(in), tol, [&] {
      const double v = f();
      return std::pair{v, std::isfinite(v) && v <= tol};
    });
  }
  void at_least(std::string name, Inputs in, double tol, const std::function<double()>& f) {
    run(std::move(name), std::move(in), tol, [&] {
      const double v = f();
      return std::pair{v, std::isfinite(v) && v >= tol};
    });
  }
  void run(std::string name, Inputs in, double tol, const std::function<std::pair<double, bool>()>& f) {
    CheckRecord rec{std::move(name), std::move(in), 0.0, tol, false, {}};
    try {
      std::tie(rec.value, rec.pass) = f();
    } catch (const std::exception& e) {
      rec.value = std::numeric_limits<double>::quiet_NaN();
      rec.note = e.what();
    }
    records.push_back(std::move(rec));
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Unit ball indicator smoothed over 1.5 nodes in t: resolved by the trapezoid
// rule, and the smoothing shifts the potential by only (ασ)²/4 relative.
RadialField smoothed_ball(const GridPtr& grid) {
  const double sigma = 1.5 * grid->h();
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = 0.5 * std::erfc(grid->t(i) / sigma);
  return RadialField(grid, std::move(v));
}

void identities(Suite& s) {
  const auto& cfg = s.cfg;
  const auto grid = cfg.grid();
  const auto p0 = make_params(cfg.N, cfg.alpha, 0.0);
  const double hl = p0.hardy_limit();
  const std::vector<double> thetas{0.16 * hl, 0.36 * hl, 0.64 * hl, 0.88 * hl};

  s.at_most("transform_identity_random_bumps", {{"fields_per_theta", 20}}, 1e-5, [&] {
    std::mt19937_64 rng(cfg.solver.seed);
    double worst = 0.0;
    for (double th : thetas) {
      const auto p = make_params(cfg.N, cfg.alpha, th);
      for (int k = 0; k < 20; ++k) worst = std::max(worst, transform_identity_check(p, random_bump_field(grid, rng)));
    }
    return worst;
  });
  s.at_most("transform_identity_gaussian", {{"theta", 0.64 * hl}}, 1e-6, [&] {
    return transform_identity_check(make_params(cfg.N, cfg.alpha, 0.64 * hl), gaussian_bump(grid, 0.0, 1.0));
  });
  s.at_most("divergence_identity_bumps", {{"fields", 20}}, 1e-8, [&] {
    std::mt19937_64 rng(cfg.solver.seed + 1);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) worst = std::max(worst, divergence_identity_check(p0, random_bump_field(grid, rng)));
    return std::max(worst, divergence_identity_check(p0, gaussian_bump(grid, 0.0, 1.0)));
  });
  s.at_most("divergence_identity_bubble", {}, 1e-6,
            [&] { return divergence_identity_check(p0, bubble(p0, grid, 1.0)); });
  s.at_most("weighted_round_trip", {{"theta", cfg.theta}}, 4.5e-16, [&] {
    const auto p = cfg.params();
    std::mt19937_64 rng(cfg.solver.seed + 2);
    const auto u = random_bump_field(grid, rng);
    const auto back = from_weighted(p, to_weighted(p, u));
    double worst = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      if (u[i] != 0.0) worst = std::max(worst, rel(back[i], u[i]));
    }
    return worst;
  });
  if (grid->symmetric()) {
    s.at_most("kelvin_involution", {}, 4.5e-16, [&] {
      const auto u = bubble(p0, grid, 0.7);
      const auto kk = kelvin(p0, kelvin(p0, u));
      double worst = 0.0;
      for (int i = 0; i < u.size(); ++i) worst = std::max(worst, rel(kk[i], u[i]));
      return worst;
    });
    s.at_most("kelvin_dterm_isometry", {}, 1e-7, [&] {
      const RieszOperator op(p0, grid);
      std::mt19937_64 rng(cfg.solver.seed + 3);
      const auto u = random_bump_field(grid, rng);
      return rel(dterm(p0, op, kelvin(p0, u)), dterm(p0, op, u));
    });
  }
}

void oracles(Suite& s) {
  const auto& cfg = s.cfg;
  const auto grid = cfg.grid();
  const auto p0 = make_params(cfg.N, cfg.alpha, 0.0);
  const RieszOperator op(p0, grid);

  s.at_most("hls_extremal_constant", {{"scale", 1.0}}, 1e-3,
            [&] { const auto c = hls_extremal_check(p0, op, 1.0); return rel(c.ratio, c.constant); });
  s.at_most("hls_scale_invariance", {{"shift_nodes", 3}}, 1e-6, [&] {
    return rel(hls_extremal_check(p0, op, std::exp(3 * grid->h())).ratio, hls_extremal_check(p0, op, 1.0).ratio);
  });
  s.at_least("hls_gaussian_margin", {}, 0.01,
             [&] {
               const auto f = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
               return 1.0 - hls_ratio(p0, op, f) / p0.s_hls;
             });
  s.at_most("bubble_calibration_spread", {{"scale", 1.0}}, 1e-4,
            [&] { return calibrate_amplitude(p0, op, bubble(p0, grid, 1.0)).spread; });
  s.at_most("bubble_residual_interior", {{"window_lo", 0.1}, {"window_hi", 0.9}}, 1e-5, [&] {
    const auto b = bubble(p0, grid, 1.0);
    const double c = calibrate_amplitude(p0, op, b).amplitude;
    std::vector<double> v(b.values().begin(), b.values().end());
    for (auto& x : v) x *= c;
    return el_residual(p0, op, RadialField(grid, std::move(v)), 1.0, fraction_window(*grid, 0.1, 0.9)).relative;
  });
  if (grid->symmetric()) {
    s.at_most("bubble_kelvin_fixed_point", {}, 1e-12, [&] {
      const auto b = bubble(p0, grid, 1.0);
      const auto k = kelvin(p0, b);
      double worst = 0.0;
      for (int i = 0; i < b.size(); ++i) worst = std::max(worst, rel(k[i], b[i]));
      return worst;
    });
  }
  s.at_most("theta0_minimizer_vs_bubble", {{"theta", 0.0}}, 1e-4, [&] {
    const auto r = minimize(p0, op, default_init(p0, grid), cfg.solver);
    if (!r.converged()) throw Error(ErrorKind::numeric, "solve did not converge: " + std::string(to_string(r.status)));
    return rel(r.s_theta, rayleigh(p0, op, bubble(p0, grid, 1.0)).rayleigh);
  });
  s.at_most("riesz_ball_center", {}, 1e-3, [&] {
    const auto g = op.apply(smoothed_ball(grid));
    // I_α*χ_B at 0 = c_riesz ω/α
    return rel(g[0], p0.c_riesz * p0.omega / p0.alpha);
  });
  if (cfg.alpha == 2.0) {
    s.at_most("riesz_ball_outside", {{"r", 2.0}}, 1e-3, [&] {
      const auto g = op.apply(smoothed_ball(grid));
      const int i = static_cast<int>(std::lround((std::log(2.0) - grid->t_min()) / grid->h()));
      // Newton: c_riesz |B| r^{2-N}, sampled at the node nearest r = 2.
      const double r = grid->r(i);
      return rel(g[i], p0.c_riesz * p0.omega / p0.N * std::pow(r, 2.0 - p0.N));
    });
  }
  s.at_most("riesz_dense_fft_agreement", {{"n", static_cast<double>(grid->size())}}, 1e-7, [&] {
    std::mt19937_64 rng(cfg.solver.seed + 4);
    const auto f = random_bump_field(grid, rng);
    const auto a = op.apply_dense(f), b = op.apply_fft(f);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      num = std::max(num, std::abs(a[i] - b[i]));
      den = std::max(den, std::abs(a[i]));
    }
    return num / den;
  });
  s.at_most("riesz_self_adjoint", {}, 1e-10, [&] {
    std::mt19937_64 rng(cfg.solver.seed + 5);
    const auto f = random_bump_field(grid, rng), g = random_bump_field(grid, rng);
    const double a = op.hls_pairing(f, g), b = op.hls_pairing(g, f);
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  });
}

void asymptotics(Suite& s) {
  const auto& cfg = s.cfg;
  const auto grid = cfg.grid();
  const auto p = cfg.params();
  const RieszOperator op(p, grid);
  const Inputs th{{"theta", p.theta}};

  std::optional<SolveResult> sol;
  s.run("solve_converged", th, cfg.solver.tol, [&] {
    sol = minimize(p, op, cfg.init == "random" ? random_init(p, grid, cfg.solver.seed) : default_init(p, grid),
                   cfg.solver);
    return std::pair{sol->residual, sol->converged()};
  });
  auto need = [&]() -> const SolveResult& {
    if (!sol || !sol->converged()) throw Error(ErrorKind::numeric, "no converged solution");
    return *sol;
  };
  // 5% of the exponent, or 0.01 absolute for a vanishing one.
  auto slope_check = [&](const char* name, bool inner, double expected) {
    const double tol = expected != 0.0 ? 0.05 * std::abs(expected) : 0.01;
    s.run(name, {{"theta", p.theta}, {"expected", expected}}, tol, [&] {
      const auto fit = decay_fit(need().field);
      const auto& line = inner ? fit.inner : fit.outer;
      const double err = std::abs(line.slope - expected);
      return std::pair{err, line.valid() && err <= tol};
    });
  };
  slope_check("decay_inner_exponent", true, -p.beta);
  slope_check("decay_outer_exponent", false, -p.outer_exponent());
  s.run("bound_certificate", th, 10.0, [&] {
    const auto c = bound_check(p, need().field);
    const double ratio = c.c_low > 0.0 ? c.c_high / c.c_low : std::numeric_limits<double>::infinity();
    return std::pair{ratio, c.valid()};
  });
  if (grid->symmetric()) {
    s.at_most("kelvin_residual_interior", th, 5e-5, [&] {
      const auto w = rescale_to_solution(p, op, need().field, need().s_theta);
      return el_residual(p, op, kelvin(p, w), 1.0, fraction_window(*grid, 0.1, 0.9)).relative;
    });
  }
  s.at_most("weighted_profile_bounded", th, 10.0, [&] { return weighted_sup_ratio(p, need().field); });
  if (p.theta > 0.0) {
    s.run("continuation_monotone", {{"theta", p.theta}, {"steps", 4}}, 0.0, [&] {
      SolveOptions o = cfg.solver;
      o.continuation_steps = 4;
      const auto legs = continuation(p, [&](const ProblemParams&) {
        return std::shared_ptr<const RieszOperator>(&op, [](const RieszOperator*) {});
      }, grid, o);
      // value: smallest decrease between consecutive legs
      double min_drop = std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j < legs.size(); ++j) min_drop = std::min(min_drop, legs[j - 1].s_theta - legs[j].s_theta);
      const bool ok = legs.size() == 5 && legs.back().converged() && min_drop > 0.0;
      return std::pair{min_drop, ok};
    });
  }
}

void inequalities(Suite& s) {
  const auto& cfg = s.cfg;
  const auto grid = cfg.grid();
  const auto p0 = make_params(cfg.N, cfg.alpha, 0.0);
  const auto pw = cfg.theta > 0.0 ? cfg.params() : make_params(cfg.N, cfg.alpha, 0.64 * p0.hardy_limit());

  s.at_most("hardy_plain_random", {{"fields", 200}, {"constant", hardy_constant(p0)}}, hardy_constant(p0), [&] {
    std::mt19937_64 rng(cfg.solver.seed + 10);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) worst = std::max(worst, hardy_check(p0, random_bump_field(grid, rng)));
    return worst;
  });
  s.at_most("hardy_weighted_random", {{"fields", 200}, {"beta", pw.beta}}, weighted_hardy_constant(pw), [&] {
    std::mt19937_64 rng(cfg.solver.seed + 11);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) worst = std::max(worst, weighted_hardy_check(pw, random_bump_field(grid, rng)));
    return worst;
  });
  s.run("hardy_extremal_trend", {{"eps_log", 2}, {"eps_log", 4}, {"eps_log", 8}}, hardy_constant(p0), [&] {
    double prev = 0.0;
    bool monotone = true;
    for (double L : {2.0, 4.0, 8.0}) {
      const double r = hardy_check(p0, hardy_extremal(p0, grid, std::exp(-L)));
      monotone = monotone && r > prev && r <= hardy_constant(p0);
      prev = r;
    }
    return std::pair{prev, monotone};
  });
  s.at_least("hardy_energy_positive", {{"fields", 200}, {"theta_fraction", 0.99}}, 0.0, [&] {
    const auto p = make_params(cfg.N, cfg.alpha, 0.99 * p0.hardy_limit());
    std::mt19937_64 rng(cfg.solver.seed + 12);
    double lowest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) lowest = std::min(lowest, phi(p, random_bump_field(grid, rng)));
    return lowest > 0.0 ? lowest : -1.0;
  });
}

}  // namespace

bool is_suite(std::string_view name) {
  return std::find(std::begin(suite_names), std::end(suite_names), name) != std::end(suite_names);
}

std::vector<CheckRecord> run_suite(const RunConfig& cfg, std::string_view suite) {
  if (!is_suite(suite)) {
    throw Error(ErrorKind::configuration,
                "unknown suite '" + std::string(suite) + "' (all|identities|oracles|asymptotics|inequalities)");
  }
  Suite s{cfg, {}};
  const bool all = suite == "all";
  if (all || suite == "identities") identities(s);
  if (all || suite == "oracles") oracles(s);
  if (all || suite == "asymptotics") asymptotics(s);
  if (all || suite == "inequalities") inequalities(s);
  return std::move(s.records);
}

}  // namespace hclab::cli
