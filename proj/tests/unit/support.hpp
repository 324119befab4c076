#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "hartree/grid.hpp"

namespace hartree::test {

inline Grid line(Index n, double a = 0.0, double b = 1.0) { return build_grid(1, {{a, b}}, {n}); }

inline Grid square(Index n, double a = 0.0, double b = 1.0) {
  return build_grid(2, {{a, b}, {a, b}}, {n, n});
}

/// n -> 2(n - 1) + 1 halves the spacing and keeps every old node
inline Index refine(Index n) { return 2 * (n - 1) + 1; }

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

inline ComplexField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField u = zeros<Complex>(g);
  for (Index p = 0; p < g.size(); ++p) u.values[p] = Complex(nd(rng), nd(rng));
  return u;
}

/// Smooth complex field with a few random low modes.
inline ComplexField smooth_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Complex c[4][4];
  for (auto& row : c)
    for (auto& z : row) z = Complex(nd(rng), nd(rng));
  return sample<Complex>(g, [&](const Point& x) {
    Complex v{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < (g.dim == 2 ? 4 : 1); ++j)
        v += c[i][j] * std::cos(i * M_PI * x[0] + 0.3 * i) * std::cos(j * M_PI * x[1] + 0.7 * j) / double(1 + i + j);
    return v;
  });
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

template <typename Derived>
double max_abs(const Eigen::ArrayBase<Derived>& v) {
  return v.size() ? v.abs().maxCoeff() : 0.0;
}

}  // namespace hartree::test
