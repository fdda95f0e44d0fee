#include "hclab/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hclab/errors.hpp"
#include "hclab/functionals.hpp"
#include "hclab/io.hpp"
#include "hclab/solver.hpp"

namespace hclab::cli {

namespace fs = std::filesystem;

namespace {

void prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::configuration, "cannot create output directory " + dir.string() + ": " + ec.message());
}

std::shared_ptr<const RieszOperator> make_op(const ProblemParams& p, const GridPtr& g) {
  return std::make_shared<const RieszOperator>(p, g);
}

}  // namespace

fs::path default_output_dir() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return fs::path("out") / os.str();
}

int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto p = cfg.params();
  const auto grid = cfg.grid();
  prepare(out);

  std::vector<SolveResult> legs;
  if (cfg.solver.continuation_steps > 0) {
    legs = continuation(p, [&](const ProblemParams& q) { return make_op(q, grid); }, grid, cfg.solver);
  } else {
    const auto op = make_op(p, grid);
    const auto init = cfg.init == "random" ? random_init(p, grid, cfg.solver.seed) : default_init(p, grid);
    legs.push_back(minimize(p, *op, init, cfg.solver));
  }
  const SolveResult& r = legs.back();
  const auto leg_params = make_params(p.N, p.alpha, r.theta);

  if (cfg.write_csv) {
    write_text(out / "trace.csv", trace_csv(r.trace));
    write_text(out / "field.csv", field_csv(r.field));
  }
  if (cfg.write_json) {
    write_text(out / "result.json", solve_json(leg_params, r));
    if (legs.size() > 1) write_text(out / "continuation.json", solve_sequence_json(p, legs));
  }

  log << "theta=" << r.theta << " status=" << to_string(r.status) << " iterations=" << r.iterations
      << " s_theta=" << std::setprecision(12) << r.s_theta << " residual=" << std::setprecision(3)
      << r.residual << '\n';
  if (!r.converged()) {
    log << "hclab: solve did not converge (" << to_string(r.status) << "); partial outputs in " << out.string()
        << '\n';
    return exit_not_converged;
  }

  const auto op = make_op(p, grid);
  const auto w = rescale_to_solution(leg_params, *op, r.field, r.s_theta);
  if (cfg.write_csv) {
    write_text(out / "solution.csv", field_csv(w));
    write_text(out / "ratio.csv", ratio_csv(leg_params, r.field));
  }
  if (cfg.write_json) {
    write_text(out / "energy.json", energy_json(rayleigh(leg_params, *op, r.field)));
    write_text(out / "bound.json", bound_json(bound_check(leg_params, r.field)));
    try {
      write_text(out / "decay_fit.json", decay_fit_json(leg_params, decay_fit(r.field)));
    } catch (const Error& e) {
      log << "hclab: decay fit skipped: " << e.what() << '\n';
    }
  }
  return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::string_view suite, const fs::path& out, std::ostream& log) {
  if (!is_suite(suite)) {
    throw Error(ErrorKind::configuration,
                "unknown suite '" + std::string(suite) + "' (all|identities|oracles|asymptotics|inequalities)");
  }
  const auto records = run_suite(cfg, suite);
  prepare(out);
  write_text(out / "verify.json", checks_json(records, std::string(suite)));
  int failed = 0;
  for (const auto& rec : records) {
    log << (rec.pass ? "PASS " : "FAIL ") << rec.name << " value=" << std::setprecision(4) << rec.value
        << " tol=" << rec.tolerance;
    if (!rec.note.empty()) log << " (" << rec.note << ')';
    log << '\n';
    if (!rec.pass) ++failed;
  }
  log << records.size() - failed << '/' << records.size() << " checks passed\n";
  return failed == 0 ? exit_ok : exit_check_failed;
}

int cmd_bench(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  using clock = std::chrono::steady_clock;
  const auto p = cfg.params();
  nlohmann::json rows = nlohmann::json::array();
  bool mismatch = false;
  for (int n : cfg.bench_sizes) {
    const auto grid = cfg.symmetric ? make_symmetric_grid(cfg.N, cfg.tmax, n) : make_grid(cfg.N, cfg.tmin, cfg.tmax, n);
    const RieszOperator op(p, grid);
    std::mt19937_64 rng(cfg.solver.seed);
    const auto f = random_bump_field(grid, rng);

    auto time_ms = [&](auto&& fn) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < cfg.bench_repeats; ++k) {
        const auto t0 = clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double, std::milli>(clock::now() - t0).count());
      }
      return best;
    };
    RadialField fft = op.apply_fft(f);
    const double fft_ms = time_ms([&] { fft = op.apply_fft(f); });

    nlohmann::json row{{"n", n}, {"fft_ms", fft_ms}};
    if (n <= cfg.bench_dense_max_n) {
      RadialField dense = op.apply_dense(f);
      const double dense_ms = time_ms([&] { dense = op.apply_dense(f); });
      double num = 0.0, den = 0.0;
      for (int i = 0; i < n; ++i) {
        num = std::max(num, std::abs(dense[i] - fft[i]));
        den = std::max(den, std::abs(dense[i]));
      }
      const double err = den > 0.0 ? num / den : num;
      row["dense_ms"] = dense_ms;
      row["max_rel_err"] = err;
      row["dense_skipped"] = false;
      mismatch = mismatch || !(err <= 1e-7);
      log << "n=" << n << " dense_ms=" << dense_ms << " fft_ms=" << fft_ms << " max_rel_err=" << err << '\n';
    } else {
      row["dense_ms"] = nullptr;
      row["max_rel_err"] = nullptr;
      row["dense_skipped"] = true;
      log << "n=" << n << " dense skipped (bench.dense_max_n=" << cfg.bench_dense_max_n << ") fft_ms=" << fft_ms
          << '\n';
    }
    rows.push_back(std::move(row));
  }
  prepare(out);
  write_text(out / "bench.json",
             nlohmann::json{{"schema_version", schema_version}, {"rows", rows}}.dump(2));
  if (mismatch) {
    log << "hclab: dense and FFT paths disagree beyond 1e-7\n";
    return exit_check_failed;
  }
  return exit_ok;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hardy–Choquard ground states on logarithmic radial grids", "hclab"};
  app.require_subcommand(1);
  std::string config_path, out_dir, suite = "all";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (section.key = value lines)")->required();
    sub->add_option("--out", out_dir, "output directory (default ./out/<timestamp>)");
  };
  auto* solve = app.add_subcommand("solve", "compute the extremal and its diagnostics");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  auto* bench = app.add_subcommand("bench", "time dense vs FFT Riesz potentials");
  add_common(solve);
  add_common(verify);
  add_common(bench);
  verify->add_option("--suite", suite, "all|identities|oracles|asymptotics|inequalities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    const auto cfg = load_config(config_path);
    fs::path dir = !out_dir.empty() ? fs::path(out_dir) : !cfg.directory.empty() ? fs::path(cfg.directory)
                                                                                : default_output_dir();
    if (*solve) return cmd_solve(cfg, dir, out);
    if (*verify) return cmd_verify(cfg, suite, dir, out);
    return cmd_bench(cfg, dir, out);
  } catch (const Error& e) {
    err << "hclab: error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::configuration:
      case ErrorKind::parameter:
      case ErrorKind::input:
        return exit_config;
      default:
        return exit_not_converged;
    }
  } catch (const std::exception& e) {
    err << "hclab: error: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace hclab::cli
