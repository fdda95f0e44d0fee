#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hclab {

// Uniform grid in t = ln r carrying trapezoid weights for ∫_{R^N} f(|x|) dx,
// using dx = ω r^{N-1} dr = ω r^N dt. Dilation x -> λx with λ = e^{kh} is a
// shift by k nodes; on a symmetric window inversion r -> 1/r is the reflection
// i -> n-1-i.
class LogGrid {
 public:
  static constexpr int min_nodes = 16;

  // Throws Error(parameter) unless N >= 1, n >= 16 and t_min < t_max.
  LogGrid(int N, double t_min, double t_max, int n);

  int dimension() const { return N_; }
  int size() const { return n_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double h() const { return h_; }
  bool symmetric() const { return symmetric_; }

  double t(int i) const { return t_[i]; }
  double r(int i) const { return r_[i]; }
  // Trapezoid end factor: 1/2 at the two end nodes, 1 elsewhere.
  double tau(int i) const { return (i == 0 || i == n_ - 1) ? 0.5 : 1.0; }
  double weight(int i) const { return w_[i]; }

  std::span<const double> t() const { return t_; }
  std::span<const double> r() const { return r_; }
  std::span<const double> weights() const { return w_; }

  bool same_as(const LogGrid& other) const;

 private:
  int N_;
  double t_min_, t_max_, h_;
  int n_;
  bool symmetric_;
  std::vector<double> t_, r_, w_;
};

using GridPtr = std::shared_ptr<const LogGrid>;

GridPtr make_grid(int N, double t_min, double t_max, int n);
// Window [-t_max, t_max].
GridPtr make_symmetric_grid(int N, double t_max = 12.0, int n = 2048);

// Half-open node index range [begin, end).
struct IndexWindow {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

// Nodes from fraction lo to fraction hi of the grid, e.g. (0.05, 0.25).
IndexWindow fraction_window(const LogGrid& grid, double lo, double hi);

// A sampled radial function u(|x|). Entries are always finite.
class RadialField {
 public:
  // Throws Error(dimension) on length mismatch, Error(numeric) on non-finite values.
  RadialField(GridPtr grid, std::vector<double> values);

  static RadialField zeros(GridPtr grid);
  static RadialField sample(GridPtr grid, const std::function<double(double r)>& f);

  const LogGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

void require_same_grid(const RadialField& a, const RadialField& b);

// Σ_i w_i u_i ≈ ∫ u(|x|) dx.
double integrate(const RadialField& field);

// d/dt on a uniform grid: fourth-order central differences in the interior,
// fourth-order one-sided stencils at the two nodes next to each end. The end
// stencils are mirror images, so the operator anticommutes with reflection.
std::vector<double> t_derivative(std::span<const double> values, double h);

// Eighth-order central differences, with the t_derivative values on the four
// nodes next to each end. Used by the quadrature checks.
std::vector<double> t_derivative8(std::span<const double> values, double h);

// d/dt at the n-1 cell midpoints t_{i+1/2}: fourth-order staggered
// differences (1, -27, 27, -1)/24h, one-sided on the two end cells. Unlike the
// central nodal stencil it does not annihilate the alternating mode (-1)^i, so
// Σ(φ'_{i+1/2})² is a proper H¹ seminorm on the grid.
std::vector<double> midpoint_derivative(std::span<const double> values, double h);
// Adjoint for the plain Euclidean pairing; takes n-1 values, returns n.
std::vector<double> midpoint_derivative_transpose(std::span<const double> values, double h);

struct StencilEntry {
  int row, col;
  double value;
};
// Nonzeros of the (n-1)×n matrix applied by midpoint_derivative.
std::vector<StencilEntry> midpoint_derivative_entries(int n, double h);

// Adjoint of t_derivative with respect to the plain Euclidean pairing.
std::vector<double> t_derivative_transpose(std::span<const double> values, double h);

// du/dr = e^{-t} du/dt.
RadialField radial_derivative(const RadialField& field);

// out_i = in_{i-k}: positive k moves the profile to larger r, i.e. the field
// u(e^{-kh} r). Vacated nodes continue the boundary power law of |u| fitted
// on the nodes next to that end (constant fill if the sign changes there).
// Requires |k| < n/4, else Error(range).
RadialField shift(const RadialField& field, int k);
std::vector<double> shift_values(std::span<const double> values, int k);

// out_i = in_{n-1-i}; Error(configuration) unless the grid is symmetric.
RadialField reflect(const RadialField& field);

// u_i·e^{a t_i}.
std::vector<double> exp_weighted(const RadialField& field, double a);
RadialField from_exp_weighted(GridPtr grid, std::span<const double> values, double a);

}  // namespace hclab
