#include "hclab/cli/config.hpp"

#include <charconv>
#include <sstream>

#include "hclab/errors.hpp"
#include "hclab/io.hpp"

namespace hclab::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(int line, const std::string& key, const std::string& what) {
  throw Error(ErrorKind::configuration,
              "config line " + std::to_string(line) + ": " + key + ": " + what);
}

template <class T>
T number(const std::string& v, int line, const std::string& key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad(line, key, "expected a number, got '" + v + "'");
  return out;
}

bool boolean(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(line, key, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

GridPtr RunConfig::grid() const {
  if (symmetric) {
    if (tmin != -tmax) {
      throw Error(ErrorKind::configuration, "grid.symmetric = true needs grid.tmin = -grid.tmax");
    }
    return make_symmetric_grid(N, tmax, n);
  }
  return make_grid(N, tmin, tmax, n);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad(line, s, "expected 'section.key = value'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string v = trim(std::string_view(s).substr(eq + 1));
    if (v.empty()) bad(line, key, "missing value");

    if (key == "problem.N") c.N = number<int>(v, line, key);
    else if (key == "problem.alpha") c.alpha = number<double>(v, line, key);
    else if (key == "problem.theta") c.theta = number<double>(v, line, key);
    else if (key == "grid.tmin") c.tmin = number<double>(v, line, key);
    else if (key == "grid.tmax") c.tmax = number<double>(v, line, key);
    else if (key == "grid.n") c.n = number<int>(v, line, key);
    else if (key == "grid.symmetric") c.symmetric = boolean(v, line, key);
    else if (key == "solver.step") c.solver.step = number<double>(v, line, key);
    else if (key == "solver.max_iter") c.solver.max_iter = number<int>(v, line, key);
    else if (key == "solver.tol") c.solver.tol = number<double>(v, line, key);
    else if (key == "solver.continuation_steps") c.solver.continuation_steps = number<int>(v, line, key);
    else if (key == "solver.seed") c.solver.seed = number<std::uint64_t>(v, line, key);
    else if (key == "solver.gauge") c.solver.gauge = boolean(v, line, key);
    else if (key == "solver.concentration_alarm") c.solver.concentration_alarm = number<double>(v, line, key);
    else if (key == "solver.init") {
      if (v != "default" && v != "random") bad(line, key, "expected default or random");
      c.init = v;
    }
    else if (key == "output.directory") c.directory = v;
    else if (key == "output.formats") {
      c.write_csv = c.write_json = false;
      for (const auto& f : split_list(v)) {
        if (f == "csv") c.write_csv = true;
        else if (f == "json") c.write_json = true;
        else bad(line, key, "unknown format '" + f + "'");
      }
    }
    else if (key == "bench.sizes") {
      c.bench_sizes.clear();
      for (const auto& f : split_list(v)) c.bench_sizes.push_back(number<int>(f, line, key));
      if (c.bench_sizes.empty()) bad(line, key, "empty list");
    }
    else if (key == "bench.dense_max_n") c.bench_dense_max_n = number<int>(v, line, key);
    else if (key == "bench.repeats") c.bench_repeats = number<int>(v, line, key);
    else bad(line, key, "unknown key");
  }

  // Re-validate everything that other modules would reject later.
  try {
    (void)c.params();
    (void)c.grid();
    if (!(c.solver.step > 0.0)) throw Error(ErrorKind::parameter, "solver.step must be > 0");
    if (!(c.solver.tol > 0.0)) throw Error(ErrorKind::parameter, "solver.tol must be > 0");
    if (c.solver.max_iter < 1) throw Error(ErrorKind::parameter, "solver.max_iter must be >= 1");
    if (c.solver.continuation_steps < 0) throw Error(ErrorKind::parameter, "solver.continuation_steps must be >= 0");
    if (c.bench_repeats < 1) throw Error(ErrorKind::parameter, "bench.repeats must be >= 1");
    for (int n : c.bench_sizes) {
      if (n < LogGrid::min_nodes) throw Error(ErrorKind::parameter, "bench.sizes entries must be >= 16");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::configuration) throw;
    throw Error(ErrorKind::configuration, e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::configuration) throw;
    throw Error(ErrorKind::configuration, e.what());
  }
}

}  // namespace hclab::cli
