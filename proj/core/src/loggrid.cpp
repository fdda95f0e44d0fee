#include "hclab/loggrid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hclab/errors.hpp"
#include "hclab/params.hpp"

namespace hclab {

LogGrid::LogGrid(int N, double t_min, double t_max, int n)
    : N_(N), t_min_(t_min), t_max_(t_max), h_(0.0), n_(n), symmetric_(false) {
  if (N < 1) throw Error(ErrorKind::parameter, "grid dimension must be positive");
  if (!std::isfinite(t_min) || !std::isfinite(t_max)) {
    throw Error(ErrorKind::input, "grid window must be finite");
  }
  if (n < min_nodes) {
    throw Error(ErrorKind::parameter, "grid needs n >= 16 nodes, got " + std::to_string(n));
  }
  if (!(t_min < t_max)) throw Error(ErrorKind::parameter, "grid needs t_min < t_max");

  h_ = (t_max - t_min) / (n - 1);
  symmetric_ = (t_min == -t_max);
  const double omega = sphere_area(N);
  t_.resize(n);
  r_.resize(n);
  w_.resize(n);
  for (int i = 0; i < n; ++i) {
    // symmetric windows get exactly antisymmetric node positions
    t_[i] = symmetric_ ? t_max * (2.0 * i - (n - 1)) / (n - 1) : t_min + i * h_;
    r_[i] = std::exp(t_[i]);
    w_[i] = omega * std::exp(N * t_[i]) * h_ * tau(i);
  }
}

bool LogGrid::same_as(const LogGrid& other) const {
  return this == &other || (N_ == other.N_ && n_ == other.n_ && t_min_ == other.t_min_ &&
                            t_max_ == other.t_max_);
}

GridPtr make_grid(int N, double t_min, double t_max, int n) {
  return std::make_shared<const LogGrid>(N, t_min, t_max, n);
}

GridPtr make_symmetric_grid(int N, double t_max, int n) {
  return make_grid(N, -t_max, t_max, n);
}

IndexWindow fraction_window(const LogGrid& grid, double lo, double hi) {
  const int n = grid.size();
  IndexWindow w{static_cast<int>(std::lround(lo * n)), static_cast<int>(std::lround(hi * n))};
  w.begin = std::clamp(w.begin, 0, n);
  w.end = std::clamp(w.end, w.begin, n);
  return w;
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::configuration, "field without grid");
  if (static_cast<int>(values_.size()) != grid_->size()) {
    std::ostringstream os;
    os << "field has " << values_.size() << " values for a grid of " << grid_->size() << " nodes";
    throw Error(ErrorKind::dimension, os.str());
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::numeric, "field value is not finite");
  }
}

RadialField RadialField::zeros(GridPtr grid) {
  const int n = grid->size();
  return RadialField(std::move(grid), std::vector<double>(n, 0.0));
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->r(i));
  return RadialField(std::move(grid), std::move(v));
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (!a.grid().same_as(b.grid())) throw Error(ErrorKind::dimension, "fields live on different grids");
}

double integrate(const RadialField& field) {
  const auto w = field.grid().weights();
  double s = 0.0;
  for (int i = 0; i < field.size(); ++i) s += w[i] * field[i];
  return s;
}

namespace {

// Rows of the fourth-order first-derivative matrix (times 12h).
constexpr double c_edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
constexpr double c_edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
constexpr double c_central[5] = {1.0, -8.0, 0.0, 8.0, -1.0};

template <class Visit>
void visit_derivative_rows(int n, Visit&& visit) {
  visit(0, 0, c_edge0, 1.0);
  visit(1, 0, c_edge1, 1.0);
  for (int i = 2; i < n - 2; ++i) visit(i, i - 2, c_central, 1.0);
  // mirrored ends: row n-1-i uses -reverse(row i)
  visit(n - 2, n - 5, c_edge1, -1.0);
  visit(n - 1, n - 5, c_edge0, -1.0);
}

// Coefficient j of a row starting at column `first`; mirrored rows read the
// stencil backwards.
inline double coeff(const double* c, double sign, int j) {
  return sign > 0 ? c[j] : -c[4 - j];
}

}  // namespace

std::vector<double> t_derivative(std::span<const double> values, double h) {
  const int n = static_cast<int>(values.size());
  if (n < 5) throw Error(ErrorKind::range, "derivative needs at least 5 nodes");
  std::vector<double> out(n, 0.0);
  const double scale = 1.0 / (12.0 * h);
  visit_derivative_rows(n, [&](int row, int first, const double* c, double sign) {
    double s = 0.0;
    for (int j = 0; j < 5; ++j) s += coeff(c, sign, j) * values[first + j];
    out[row] = s * scale;
  });
  return out;
}

std::vector<double> t_derivative_transpose(std::span<const double> values, double h) {
  const int n = static_cast<int>(values.size());
  if (n < 5) throw Error(ErrorKind::range, "derivative needs at least 5 nodes");
  std::vector<double> out(n, 0.0);
  const double scale = 1.0 / (12.0 * h);
  visit_derivative_rows(n, [&](int row, int first, const double* c, double sign) {
    for (int j = 0; j < 5; ++j) out[first + j] += coeff(c, sign, j) * values[row] * scale;
  });
  return out;
}

std::vector<double> t_derivative8(std::span<const double> values, double h) {
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  auto d = t_derivative(values, h);
  const int n = static_cast<int>(values.size());
  for (int i = 4; i < n - 4; ++i) {
    double s = 0.0;
    for (int k = 1; k <= 4; ++k) s += c[k - 1] * (values[i + k] - values[i - k]);
    d[i] = s / h;
  }
  return d;
}

namespace {

// Rows of the staggered derivative (times 24h): row k approximates φ' at
// t_{k+1/2} from four neighbouring nodes.
constexpr double m_edge[4] = {-23.0, 21.0, 3.0, -1.0};
constexpr double m_central[4] = {1.0, -27.0, 27.0, -1.0};

template <class Visit>
void visit_midpoint_rows(int n, Visit&& visit) {
  visit(0, 0, m_edge, 1.0);
  for (int k = 1; k < n - 2; ++k) visit(k, k - 1, m_central, 1.0);
  visit(n - 2, n - 4, m_edge, -1.0);
}

inline double mcoeff(const double* c, double sign, int j) { return sign > 0 ? c[j] : -c[3 - j]; }

}  // namespace

std::vector<double> midpoint_derivative(std::span<const double> values, double h) {
  const int n = static_cast<int>(values.size());
  if (n < 5) throw Error(ErrorKind::range, "derivative needs at least 5 nodes");
  std::vector<double> out(n - 1, 0.0);
  const double scale = 1.0 / (24.0 * h);
  visit_midpoint_rows(n, [&](int row, int first, const double* c, double sign) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += mcoeff(c, sign, j) * values[first + j];
    out[row] = s * scale;
  });
  return out;
}

std::vector<double> midpoint_derivative_transpose(std::span<const double> values, double h) {
  const int n = static_cast<int>(values.size()) + 1;
  if (n < 5) throw Error(ErrorKind::range, "derivative needs at least 5 nodes");
  std::vector<double> out(n, 0.0);
  const double scale = 1.0 / (24.0 * h);
  visit_midpoint_rows(n, [&](int row, int first, const double* c, double sign) {
    for (int j = 0; j < 4; ++j) out[first + j] += mcoeff(c, sign, j) * values[row] * scale;
  });
  return out;
}

std::vector<StencilEntry> midpoint_derivative_entries(int n, double h) {
  if (n < 5) throw Error(ErrorKind::range, "derivative needs at least 5 nodes");
  std::vector<StencilEntry> entries;
  entries.reserve(4 * n);
  const double scale = 1.0 / (24.0 * h);
  visit_midpoint_rows(n, [&](int row, int first, const double* c, double sign) {
    for (int j = 0; j < 4; ++j) entries.push_back({row, first + j, mcoeff(c, sign, j) * scale});
  });
  return entries;
}

RadialField radial_derivative(const RadialField& field) {
  const auto& g = field.grid();
  auto d = t_derivative(field.values(), g.h());
  for (int i = 0; i < g.size(); ++i) d[i] /= g.r(i);
  return RadialField(field.grid_ptr(), std::move(d));
}

namespace {

// Least-squares slope of ln|v| against node index over `count` nodes starting
// at `first`; NaN when the sign is not constant there.
double boundary_log_slope(std::span<const double> v, int first, int count) {
  const double s0 = v[first];
  if (s0 == 0.0) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int j = 0; j < count; ++j) {
    const double x = v[first + j];
    if (x == 0.0 || (x > 0) != (s0 > 0)) return std::nan("");
    const double y = std::log(std::abs(x));
    sx += j;
    sy += y;
    sxx += double(j) * j;
    sxy += j * y;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace

std::vector<double> shift_values(std::span<const double> values, int k) {
  const int n = static_cast<int>(values.size());
  if (std::abs(k) * 4 >= n) {
    throw Error(ErrorKind::range, "shift by " + std::to_string(k) + " needs |k| < n/4");
  }
  std::vector<double> out(n);
  const int fit = std::min(8, n);
  const double slope_in = boundary_log_slope(values, 0, fit);
  const double slope_out = boundary_log_slope(values, n - fit, fit);
  for (int i = 0; i < n; ++i) {
    const int j = i - k;
    if (j >= 0 && j < n) {
      out[i] = values[j];
    } else if (j < 0) {
      out[i] = std::isfinite(slope_in) ? values[0] * std::exp(slope_in * j) : values[0];
    } else {
      out[i] = std::isfinite(slope_out) ? values[n - 1] * std::exp(slope_out * (j - (n - 1)))
                                        : values[n - 1];
    }
  }
  return out;
}

RadialField shift(const RadialField& field, int k) {
  if (k == 0) return field;
  return RadialField(field.grid_ptr(), shift_values(field.values(), k));
}

RadialField reflect(const RadialField& field) {
  if (!field.grid().symmetric()) {
    throw Error(ErrorKind::configuration, "reflection needs a symmetric window t_min = -t_max");
  }
  std::vector<double> v(field.values().rbegin(), field.values().rend());
  return RadialField(field.grid_ptr(), std::move(v));
}

std::vector<double> exp_weighted(const RadialField& field, double a) {
  const auto& g = field.grid();
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = field[i] * std::exp(a * g.t(i));
  return v;
}

RadialField from_exp_weighted(GridPtr grid, std::span<const double> values, double a) {
  std::vector<double> v(values.size());
  for (int i = 0; i < grid->size(); ++i) v[i] = values[i] * std::exp(-a * grid->t(i));
  return RadialField(std::move(grid), std::move(v));
}

}  // namespace hclab
