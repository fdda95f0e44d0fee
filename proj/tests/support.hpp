#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "hclab/loggrid.hpp"

namespace test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double max_rel(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

inline hclab::RadialField scaled(const hclab::RadialField& u, double c) {
  std::vector<double> v(u.values().begin(), u.values().end());
  for (auto& x : v) x *= c;
  return hclab::RadialField(u.grid_ptr(), std::move(v));
}

}  // namespace test
