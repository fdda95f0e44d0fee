#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hclab/loggrid.hpp"
#include "hclab/params.hpp"
#include "hclab/riesz.hpp"

namespace hclab {

struct EnergyReport {
  double phi = 0.0;               // ∫(|∇u|² - θu²/|x|²) dx
  double dterm = 0.0;             // ∫(I_α*|u|^p̄)|u|^p̄ dx
  double rayleigh = 0.0;          // phi / dterm^{1/p̄}
  double el_residual_norm = 0.0;  // relative L²(dx) norm of the Euler–Lagrange residual
};

// The discrete energies, written for the scaled profile φ = r^{(N-2)/2}u.
// In t = ln r,
//   Φ = ω ∫ (φ_t² + m² φ²) dt,     m² = (N-2)²/4 - θ,
// with φ_t taken at the cell midpoints (midpoint_derivative)
//   D = ω ∫ (W * τ|φ|^p̄) |φ|^p̄ dt,
// both invariant under translation in t (dilation) and reflection t -> -t
// (Kelvin transform). Φ also carries ω m (φ_0² + φ_{n-1}²), the energy of the
// decaying exponential continuation past each window end, so it approximates
// the whole-space ∫(|∇u|² - θu²/|x|²)dx and its minimizer gets the correct
// power-law boundary behavior. The φ-form differs from the u-form by the flux
// ω(N-2)/2·[φ²], which vanishes for decaying fields; unlike the u-form it
// stays positive definite on a truncated window.
//
// Λ = Φ/D is the coefficient that makes the residual orthogonal to u and
// zeroes the gradient of the Rayleigh quotient.
class ScaledEnergy {
 public:
  ScaledEnergy(const ProblemParams& params, const RieszOperator& op);
  ~ScaledEnergy();
  ScaledEnergy(ScaledEnergy&&) noexcept;
  ScaledEnergy& operator=(ScaledEnergy&&) = delete;
  ScaledEnergy(const ScaledEnergy&) = delete;

  const ProblemParams& params() const { return params_; }
  const RieszOperator& op() const { return *op_; }
  const LogGrid& grid() const { return op_->grid(); }

  std::vector<double> to_scaled(const RadialField& u) const;
  RadialField from_scaled(std::span<const double> phi) const;

  double phi(std::span<const double> phi) const;
  // W * τ|φ|^p̄; equals e^{(N-α)t/2}(I_α*|u|^p̄).
  std::vector<double> potential(std::span<const double> phi) const;
  double dterm(std::span<const double> phi, std::span<const double> potential) const;

  // (Lφ)_i with L = T^{-1}(GᵀG + m²T + (m/h)B), G the midpoint derivative and
  // B the two end nodes; the τ-weighted gradient of Φ/(2ωh).
  std::vector<double> apply_operator(std::span<const double> phi) const;
  // Lφ - Λ·potential·|φ|^{p̄-2}φ.
  std::vector<double> residual(std::span<const double> phi, std::span<const double> potential,
                               double multiplier) const;
  // Solves L d = rhs (L is symmetric positive definite in the τ-weighted pairing).
  std::vector<double> solve_operator(std::span<const double> rhs) const;

  // Relative L²(dx) norm ‖R‖/‖-Δu‖ for a residual given in scaled form, over
  // `window` (whole grid when empty).
  double relative_residual_norm(std::span<const double> phi, std::span<const double> residual,
                                std::optional<IndexWindow> window = std::nullopt) const;

 private:
  struct Factor;

  ProblemParams params_;
  const RieszOperator* op_;
  std::unique_ptr<Factor> factor_;
};

double phi(const ProblemParams& params, const RadialField& u);
double dterm(const ProblemParams& params, const RieszOperator& op, const RadialField& u);
// Throws Error(degenerate) when dterm(u) = 0.
EnergyReport rayleigh(const ProblemParams& params, const RieszOperator& op, const RadialField& u);

// Gradient of the Rayleigh quotient with respect to the nodal values of u.
std::vector<double> rayleigh_gradient(const ProblemParams& params, const RieszOperator& op,
                                      const RadialField& u);

struct Residual {
  RadialField field;       // -Δu - θu/r² - Λ(I_α*|u|^p̄)|u|^{p̄-2}u
  double relative = 0.0;   // ‖R‖_{L²(dx)} / ‖-Δu‖_{L²(dx)}
  double multiplier = 0.0; // Λ
};

// Λ = Φ/D unless `multiplier` is given (Λ = 1 checks the unnormalized equation).
Residual el_residual(const ProblemParams& params, const RieszOperator& op, const RadialField& u,
                     std::optional<double> multiplier = std::nullopt,
                     std::optional<IndexWindow> window = std::nullopt);

// w = S^{1/(2p̄-2)} u for a minimizer with D(u) = 1 and Φ(u) = S; w solves the
// equation with unit coefficient. Error(precondition) unless |D(u) - 1| ≤ 1e-8.
RadialField rescale_to_solution(const ProblemParams& params, const RieszOperator& op,
                                const RadialField& u, double s_theta);

}  // namespace hclab
