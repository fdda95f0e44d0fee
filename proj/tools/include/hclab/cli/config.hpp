#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hclab/loggrid.hpp"
#include "hclab/params.hpp"
#include "hclab/solver.hpp"

namespace hclab::cli {

struct RunConfig {
  // problem
  int N = 3;
  double alpha = 2.0;
  double theta = 0.0;
  // grid
  double tmin = -12.0;
  double tmax = 12.0;
  int n = 2048;
  bool symmetric = true;
  // solver
  SolveOptions solver;
  std::string init = "default";  // default | random
  // output
  std::string directory;  // empty: ./out/<timestamp>
  bool write_csv = true;
  bool write_json = true;
  // bench
  std::vector<int> bench_sizes{1024, 4096, 16384};
  int bench_dense_max_n = 16384;
  int bench_repeats = 3;

  ProblemParams params() const { return make_params(N, alpha, theta); }
  GridPtr grid() const;
};

// Flat `section.key = value` lines, `#` starts a comment. Unknown keys, bad
// values and parameter violations all throw Error(configuration) naming the
// line or the bound.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace hclab::cli
