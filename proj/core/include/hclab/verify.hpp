#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hclab/loggrid.hpp"
#include "hclab/params.hpp"
#include "hclab/riesz.hpp"

namespace hclab {

// (t/(t² + r²))^{(N-2)/2}. Error(parameter) unless θ = 0 and t > 0.
RadialField bubble(const ProblemParams& params, GridPtr grid, double t = 1.0);

// r^{-β}(1 + r^{2-4β/(N-2)})^{-(N-2)/2}, the shape of the two-sided bound.
RadialField model_profile(const ProblemParams& params, GridPtr grid);

struct Calibration {
  double amplitude = 0.0;  // C with C·w solving the θ = 0 equation
  double spread = 0.0;     // (max - min)/median of the pointwise ratio
};

// Pointwise ratio (-Δw)/((I_α*w^p̄)w^{p̄-1}) on nodes [20%, 80%), C = median^{1/(2p̄-2)}.
// Error(parameter) if θ ≠ 0, Error(precondition) if w ≤ 0 there,
// Error(calibration) if the spread exceeds 1e-3.
Calibration calibrate_amplitude(const ProblemParams& params, const RieszOperator& op,
                                const RadialField& w);

// v = r^β u and back.
RadialField to_weighted(const ProblemParams& params, const RadialField& u);
RadialField from_weighted(const ProblemParams& params, const RadialField& v);

// |Φ(u) - ∫|∇v|² r^{-2β} dx| / Φ(u), v = r^β u, both sides by direct quadrature.
// Error(degenerate) if Φ(u) ≤ 0.
double transform_identity_check(const ProblemParams& params, const RadialField& u);

// |(N-2)∫u²/r² dx + 2∫(u/r) u' dx - ω[r^{N-2}u²]| / ∫u²/r² dx; the bracket is
// the flux through the window ends. Returns 0 for u ≡ 0.
double divergence_identity_check(const ProblemParams& params, const RadialField& u);

// ∫u²/r² dx / ∫|u'|² dx, bounded by (2/(N-2))².
double hardy_check(const ProblemParams& params, const RadialField& u);
// ∫v² r^{-2β-2} dx / ∫|v'|² r^{-2β} dx, bounded by (2/(N-2β-2))².
double weighted_hardy_check(const ProblemParams& params, const RadialField& v);
double hardy_constant(const ProblemParams& params);
double weighted_hardy_constant(const ProblemParams& params);

struct HlsCheck {
  double ratio = 0.0;     // ∫∫ f f |x-y|^{α-N} / |f|_p²
  double constant = 0.0;  // S(N, α)
};
// f = (t² + r²)^{-(N+α)/2}, p = 2N/(N+α). Warns if more than 1e-8 of ∫f^p
// lies outside the window.
HlsCheck hls_extremal_check(const ProblemParams& params, const RieszOperator& op, double t = 1.0);
// The same ratio for an arbitrary f.
double hls_ratio(const ProblemParams& params, const RieszOperator& op, const RadialField& f);

// K_u(r) = r^{2-N} u(1/r). Error(configuration) unless the grid is symmetric.
RadialField kelvin(const ProblemParams& params, const RadialField& u);

struct LineFit {
  IndexWindow window;
  double slope = 0.0;
  double r2 = 0.0;
  double rms = 0.0;  // root-mean-square residual of ln u
  // r² ≥ 0.999, or ln u within 1e-4 of the line: for (nearly) flat data, such
  // as the inner window of a θ = 0 profile, r² carries no information.
  bool valid() const { return r2 >= 0.999 || rms <= 1e-4; }
};

struct DecayFit {
  LineFit inner, outer;
  double inner_exponent() const { return inner.slope; }
  double outer_exponent() const { return outer.slope; }
  bool valid() const { return inner.valid() && outer.valid(); }
};

// Least-squares slope of ln u against ln r on each window. Error(fit) if u ≤ 0
// anywhere in a window or a window has fewer than 3 nodes.
DecayFit decay_fit(const RadialField& u, IndexWindow inner, IndexWindow outer);
// Windows [5%, 25%) and [75%, 95%).
DecayFit decay_fit(const RadialField& u);

struct BoundCertificate {
  double c_low = 0.0;
  double c_high = 0.0;
  int violations = 0;  // nodes with u ≤ 0 in the test window
  IndexWindow window;
  bool valid() const { return violations == 0 && c_low > 0.0 && c_high / c_low < 10.0; }
};
// min and max of u/m over nodes [5%, 95%), m = model_profile.
BoundCertificate bound_check(const ProblemParams& params, const RadialField& u);

// max(v)/median(v) over the inner half of the nodes for v = r^β u.
double weighted_sup_ratio(const ProblemParams& params, const RadialField& u);

// Test families. Bumps are exp(-1/(1-x²)) with x = (t - center)/half_width.
RadialField bump(GridPtr grid, double center, double half_width, double amplitude = 1.0);
RadialField gaussian_bump(GridPtr grid, double center, double width, double amplitude = 1.0);
// 1-4 bumps with centers in [-5, 5], half-widths in [1, 4] and amplitudes in
// [0.2, 1]; the result is a function of u(r), so it is a valid test field for
// both the plain and the weighted checks.
RadialField random_bump_field(GridPtr grid, std::mt19937_64& rng);
// r^{-(N-2)/2} on ε ≤ r ≤ 1/ε with C^∞ ramps of length `ramp` in t outside.
RadialField hardy_extremal(const ProblemParams& params, GridPtr grid, double eps, double ramp = 2.0);

// One entry of a verification report.
struct CheckRecord {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

}  // namespace hclab
