#include "hclab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hclab/errors.hpp"

namespace hclab {

using nlohmann::json;

namespace {

std::string g17(double x) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, len);
}

double parse_double(std::string_view s, int line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::input, "bad number '" + std::string(s) + "' on line " + std::to_string(line));
  }
  return v;
}

json fit_json(const LineFit& f) {
  return {{"begin", f.window.begin}, {"end", f.window.end}, {"slope", f.slope},
          {"r2", f.r2},              {"rms", f.rms},         {"valid", f.valid()}};
}

json diag_json(const CompactnessDiag& d) {
  return {{"inner_energy_frac", d.inner_energy_frac},
          {"outer_energy_frac", d.outer_energy_frac},
          {"inner_nu_frac", d.inner_nu_frac},
          {"outer_nu_frac", d.outer_nu_frac}};
}

json params_object(const ProblemParams& p) {
  return {{"N", p.N},       {"alpha", p.alpha},     {"theta", p.theta},
          {"pbar", p.pbar}, {"beta", p.beta},       {"omega", p.omega},
          {"c_riesz", p.c_riesz}, {"s_hls", p.s_hls}};
}

json result_object(const SolveResult& r) {
  json trace = json::array();
  for (const auto& row : r.trace) trace.push_back({row.iter, row.rayleigh, row.residual});
  const auto& g = r.field.grid();
  return {{"theta", r.theta},
          {"status", std::string(to_string(r.status))},
          {"converged", r.converged()},
          {"s_theta", r.s_theta},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"diag", diag_json(r.diag)},
          {"grid", {{"t_min", g.t_min()}, {"t_max", g.t_max()}, {"n", g.size()}}},
          {"trace", trace}};
}

}  // namespace

std::string field_csv(const RadialField& u) {
  std::string out = "r,value\n";
  out.reserve(40 * u.size());
  for (int i = 0; i < u.size(); ++i) {
    out += g17(u.grid().r(i));
    out += ',';
    out += g17(u[i]);
    out += '\n';
  }
  return out;
}

RadialField parse_field_csv(const std::string& text, int N) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> r, v;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line.rfind("r,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::input, "missing comma on line " + std::to_string(lineno));
    r.push_back(parse_double(std::string_view(line).substr(0, comma), lineno));
    v.push_back(parse_double(std::string_view(line).substr(comma + 1), lineno));
    if (!(r.back() > 0.0)) throw Error(ErrorKind::input, "nonpositive r on line " + std::to_string(lineno));
  }
  const int n = static_cast<int>(r.size());
  if (n < LogGrid::min_nodes) throw Error(ErrorKind::input, "field CSV has too few rows");
  const double t0 = std::log(r.front()), t1 = std::log(r.back());
  const double span = t1 - t0;
  const bool symmetric = std::abs(t0 + t1) <= 1e-9 * span;
  auto grid = symmetric ? make_grid(N, -0.5 * span, 0.5 * span, n) : make_grid(N, t0, t1, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(std::log(r[i]) - grid->t(i)) > 1e-9 * span) {
      throw Error(ErrorKind::input, "field CSV nodes are not uniform in ln r");
    }
  }
  return RadialField(std::move(grid), std::move(v));
}

std::string trace_csv(std::span<const TraceRow> trace) {
  std::string out = "iter,rayleigh,residual\n";
  for (const auto& row : trace) {
    out += std::to_string(row.iter) + ',' + g17(row.rayleigh) + ',' + g17(row.residual) + '\n';
  }
  return out;
}

std::string ratio_csv(const ProblemParams& params, const RadialField& u) {
  const auto m = model_profile(params, u.grid_ptr());
  std::string out = "r,ratio\n";
  for (int i = 0; i < u.size(); ++i) out += g17(u.grid().r(i)) + ',' + g17(u[i] / m[i]) + '\n';
  return out;
}

std::string params_json(const ProblemParams& params) {
  json j = params_object(params);
  j["schema_version"] = schema_version;
  return j.dump(2);
}

std::string energy_json(const EnergyReport& r) {
  return json{{"schema_version", schema_version},
              {"phi", r.phi},
              {"dterm", r.dterm},
              {"rayleigh", r.rayleigh},
              {"el_residual_norm", r.el_residual_norm}}
      .dump(2);
}

EnergyReport parse_energy_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    return {j.at("phi").get<double>(), j.at("dterm").get<double>(), j.at("rayleigh").get<double>(),
            j.at("el_residual_norm").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::input, std::string("energy report: ") + e.what());
  }
}

std::string solve_json(const ProblemParams& params, const SolveResult& result) {
  json j = result_object(result);
  j["schema_version"] = schema_version;
  j["params"] = params_object(params);
  return j.dump(2);
}

std::string solve_sequence_json(const ProblemParams& target, std::span<const SolveResult> legs) {
  json arr = json::array();
  for (const auto& leg : legs) arr.push_back(result_object(leg));
  json j{{"schema_version", schema_version}, {"params", params_object(target)}, {"legs", arr}};
  return j.dump(2);
}

std::string decay_fit_json(const ProblemParams& params, const DecayFit& fit) {
  return json{{"schema_version", schema_version},
              {"inner", fit_json(fit.inner)},
              {"outer", fit_json(fit.outer)},
              {"expected_inner", -params.beta},
              {"expected_outer", -params.outer_exponent()},
              {"valid", fit.valid()}}
      .dump(2);
}

std::string bound_json(const BoundCertificate& c) {
  return json{{"schema_version", schema_version},
              {"c_low", c.c_low},
              {"c_high", c.c_high},
              {"ratio", c.c_low > 0.0 ? c.c_high / c.c_low : std::numeric_limits<double>::infinity()},
              {"violations", c.violations},
              {"begin", c.window.begin},
              {"end", c.window.end},
              {"valid", c.valid()}}
      .dump(2);
}

std::string checks_json(std::span<const CheckRecord> records, const std::string& suite) {
  json arr = json::array();
  int failed = 0;
  for (const auto& rec : records) {
    json inputs = json::object();
    for (const auto& [k, v] : rec.inputs) inputs[k] = v;
    json item{{"name", rec.name},
              {"inputs", inputs},
              {"value", rec.value},
              {"tolerance", rec.tolerance},
              {"pass", rec.pass}};
    if (!rec.note.empty()) item["note"] = rec.note;
    arr.push_back(std::move(item));
    if (!rec.pass) ++failed;
  }
  return json{{"schema_version", schema_version},
              {"suite", suite},
              {"total", records.size()},
              {"failed", failed},
              {"checks", arr}}
      .dump(2);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::input, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::input, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hclab
