#pragma once

namespace hclab {

// Problem data for  -Δu - θ u/|x|² = (I_α * |u|^p̄)|u|^{p̄-2}u  in R^N,
// together with every derived constant the rest of the library needs.
// Only make_params() produces instances, so the invariants always hold.
struct ProblemParams {
  int N = 3;
  double alpha = 2.0;
  double theta = 0.0;

  double pbar = 5.0;     // (N+α)/(N-2)
  double beta = 0.0;     // (N-2-√((N-2)²-4θ))/2, blow-up rate at the origin
  double omega = 0.0;    // |S^{N-1}| = 2π^{N/2}/Γ(N/2)
  double c_riesz = 0.0;  // Γ((N-α)/2) / (Γ(α/2) π^{N/2} 2^α)
  double s_hls = 0.0;    // sharp HLS constant S(N,α)

  // (N-2)/2: the profile r^kappa·u is translation-covariant in t = ln r.
  double kappa() const { return 0.5 * (N - 2); }
  // √((N-2)²/4 - θ) = kappa - beta, exponential decay rate of r^kappa·u in |t|.
  double mass() const { return kappa() - beta; }
  // N-2-β, decay exponent at infinity.
  double outer_exponent() const { return N - 2 - beta; }
  // (N-2)²/4, the plain Hardy threshold.
  double hardy_limit() const { return 0.25 * (N - 2) * (N - 2); }
};

// Validates (N, α, θ) and fills in the derived constants.
// Throws Error(parameter) naming the violated bound, Error(input) on NaN/inf.
ProblemParams make_params(int N, double alpha, double theta);

// π^{(N-α)/2} Γ(α/2)/Γ((N+α)/2) · (Γ(N/2)/Γ(N))^{-α/N}, for 0 < α < N.
double sharp_hls_constant(int N, double alpha);

// Γ((N-α)/2) / (Γ(α/2) π^{N/2} 2^α), for 0 < α < N.
double riesz_normalization(int N, double alpha);

// 2π^{N/2}/Γ(N/2).
double sphere_area(int N);

// Radial Riesz multiplier: I_α * |x|^{-s} = riesz_mellin_multiplier(N,α,s)·|x|^{α-s}
// for α < s < N.
double riesz_mellin_multiplier(int N, double alpha, double s);

}  // namespace hclab
