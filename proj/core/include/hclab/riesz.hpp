#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hclab/loggrid.hpp"
#include "hclab/params.hpp"

namespace hclab {

// Sphere average of the Riesz kernel: for |x| = r, |y| = ρr,
//   mean_{|y|=ρr} I_α(x - y) = r^{α-N} A(ρ).
// A(ρ) = c_riesz·Γ(N/2)/(√π Γ((N-1)/2)) ∫_0^π (1+ρ²-2ρcosφ)^{(α-N)/2} sin^{N-2}φ dφ
// satisfies A(1/ρ) = ρ^{N-α} A(ρ) and A(0⁺) = c_riesz.
// ρ ≤ 1/2 uses the ₂F₁ series in ρ², ρ ∈ (1/2, 1) geometric-panel Gauss–Legendre in φ
// refined toward the near-singular point φ = 0, ρ = 1 the closed Γ form.
// Throws Error(parameter) for ρ ≤ 0, or ρ = 1 with α ≤ 1 (divergent).
double angular_profile(const ProblemParams& params, double rho);

enum class RieszPath { automatic, dense, fft };

// Radial Riesz potential f -> I_α * f on a log grid.
//
// With x_j = f_j e^{(N+α)t_j/2} the discrete operator is a symmetric Toeplitz
// convolution in the node index,
//   (I_α*f)_i e^{(N-α)t_i/2} = Σ_j W_{|i-j|} τ_j x_j,
//   W_k = ω h A(e^{-kh}) e^{-(N-α)kh/2}   (k ≥ 1),
// which is what makes dilations exact index shifts and the operator exactly
// self-adjoint for the dx pairing. W_0 is set so that Σ_k W_k over the infinite
// lattice equals the Mellin multiplier at s = (N+α)/2; this removes the leading
// quadrature error of the kernel singularity at r = s for every α.
//
// Construction tabulates W and the FFT kernel spectrum once; afterwards the
// operator is immutable and all apply functions may run concurrently.
class RieszOperator {
 public:
  RieszOperator(const ProblemParams& params, GridPtr grid);
  ~RieszOperator();
  RieszOperator(RieszOperator&&) noexcept;
  RieszOperator& operator=(RieszOperator&&) noexcept;
  RieszOperator(const RieszOperator&) = delete;
  RieszOperator& operator=(const RieszOperator&) = delete;

  const ProblemParams& params() const { return params_; }
  const LogGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  // W_0..W_{n-1}.
  std::span<const double> kernel() const { return kernel_; }
  // α ≤ 1: the kernel profile diverges at ρ = 1 and only the corrected diagonal
  // keeps the operator finite.
  bool reduced_accuracy() const { return params_.alpha <= 1.0; }

  // out_i = Σ_j W_{|i-j|} τ_j x_j in the balanced variables above.
  void convolve(std::span<const double> x, std::span<double> out, RieszPath path) const;
  std::vector<double> convolve(std::span<const double> x,
                               RieszPath path = RieszPath::automatic) const;

  RadialField apply_dense(const RadialField& f) const;
  RadialField apply_fft(const RadialField& f) const;
  // FFT, or dense below 256 nodes.
  RadialField apply(const RadialField& f) const;

  // Row-major n×n matrix M with (I_α*f)_i = Σ_j M_ij f_j.
  std::vector<double> dense_matrix() const;

  // ∫ (I_α*f) g dx. With normalized = false the Riesz constant is divided out,
  // giving the raw ∫∫ f(x)g(y)|x-y|^{α-N} dx dy bounded by the HLS inequality.
  double hls_pairing(const RadialField& f, const RadialField& g, bool normalized = true,
                     RieszPath path = RieszPath::automatic) const;

 private:
  struct FftState;

  RadialField apply_with(const RadialField& f, RieszPath path) const;
  void convolve_dense(std::span<const double> y, std::span<double> out) const;
  void convolve_fft(std::span<const double> y, std::span<double> out) const;

  ProblemParams params_;
  GridPtr grid_;
  std::vector<double> kernel_;
  std::unique_ptr<FftState> fft_;
};

}  // namespace hclab
