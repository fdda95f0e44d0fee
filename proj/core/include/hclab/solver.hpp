#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "hclab/loggrid.hpp"
#include "hclab/params.hpp"
#include "hclab/riesz.hpp"

namespace hclab {

struct SolveOptions {
  double step = 1.0;         // initial trial step of each line search
  int max_iter = 2000;       // bound on iterates examined, including the initial one
  double tol = 1e-6;         // relative Euler–Lagrange residual target
  bool gauge = true;         // recenter the peak of r^{(N-2)/2}u at t = 0
  int continuation_steps = 0;
  std::uint64_t seed = 1;    // only used by random_init
  double concentration_alarm = 0.2;
};

// Tail fractions of the energy densities over the first and last 10% of nodes.
struct CompactnessDiag {
  double inner_energy_frac = 0.0;
  double outer_energy_frac = 0.0;
  double inner_nu_frac = 0.0;
  double outer_nu_frac = 0.0;
};

struct TraceRow {
  int iter = 0;
  double rayleigh = 0.0;
  double residual = 0.0;
};

enum class SolveStatus { converged, max_iterations, stalled, concentration_alarm };
std::string_view to_string(SolveStatus s);

struct SolveResult {
  explicit SolveResult(RadialField f) : field(std::move(f)) {}

  RadialField field;     // D(field) = 1
  double theta = 0.0;
  double s_theta = 0.0;  // Φ(field), equal to the Rayleigh quotient
  int iterations = 0;    // accepted steps
  double residual = 0.0;
  CompactnessDiag diag;
  std::vector<TraceRow> trace;
  SolveStatus status = SolveStatus::max_iterations;

  bool converged() const { return status == SolveStatus::converged; }
};

// r^{-β}(1 + r^{2-4β/(N-2)})^{-(N-2)/2}, which peaks in r^{(N-2)/2}u at r = 1.
RadialField default_init(const ProblemParams& params, GridPtr grid);
// default_init times a smooth positive modulation drawn from `seed`.
RadialField random_init(const ProblemParams& params, GridPtr grid, std::uint64_t seed);

// Preconditioned gradient descent on Φ/D^{1/p̄}. Directions solve L d = ρ, the
// Sobolev gradient of the scaled energy; steps are Armijo backtracked, clipped
// at zero, renormalized to D = 1 and (optionally) recentered. Stops at the first
// iterate whose relative residual is ≤ tol, which gets no further step.
//
// Throws Error(parameter) for invalid options, Error(precondition) if init has
// negative entries and Error(degenerate) if D(init) = 0. Non-convergence is
// reported through status, never thrown.
SolveResult minimize(const ProblemParams& params, const RieszOperator& op, const RadialField& init,
                     const SolveOptions& opts);

using OperatorFactory = std::function<std::shared_ptr<const RieszOperator>(const ProblemParams&)>;

// Solves at θ_j = θ·j/steps for j = 0..steps, each leg warm started from the
// previous one (a single solve at θ when steps = 0). Stops after the first leg
// that does not converge; that leg is the last element.
std::vector<SolveResult> continuation(const ProblemParams& target, const OperatorFactory& op_factory,
                                      GridPtr grid, const SolveOptions& opts);

CompactnessDiag monitor(const ProblemParams& params, const RieszOperator& op, const RadialField& u);

// Index shift that moves the sub-grid peak of φ to within one node of the grid
// center, limited to |k| < n/4. Applying it twice gives the same result as once.
int gauge_shift(std::span<const double> phi);

}  // namespace hclab
