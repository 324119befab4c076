#pragma once

#include <string>

#include "hartree/grid.hpp"

namespace hartree {

enum class BoundaryProfile { Uniform, Left, Right, Gaussian };

std::string to_string(BoundaryProfile p);

/// C^3 bump supported on [t0, t1]: a degree-7 smoothstep up to the midpoint
/// and its mirror image down, with value 1 at the midpoint.
double smooth_window(double t, double t0, double t1);
double smooth_window_derivative(double t, double t0, double t1);

/// Dirichlet data Q(x, t) = A w(t) exp(i omega t) g(x) with w = smooth_window
/// and g the spatial profile; Q vanishes outside [t0, t1].
struct BoundaryData {
  double amplitude = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
  double omega = 0.0;
  BoundaryProfile profile = BoundaryProfile::Uniform;
  Point center = Point::Zero();
  double sigma = 0.1;

  bool operator==(const BoundaryData&) const = default;

  bool identically_zero() const noexcept { return amplitude == 0.0; }

  double spatial(const Grid& g, Index node) const;
  /// derivative of the spatial profile along `tangent`
  double spatial_derivative(const Grid& g, Index node, const Point& tangent) const;

  Complex value(const Grid& g, Index node, double t) const;
  Complex time_derivative(const Grid& g, Index node, double t) const;

  /// Q(., t) on every boundary node
  BoundaryTrace trace(const Grid& g, double t) const;
  BoundaryTrace trace_t(const Grid& g, double t) const;
  /// Tangential derivative of Q along the face at every boundary node; zero in
  /// 1D and at corners. Its modulus is the |A . grad Q| of the tangential split.
  BoundaryTrace tangential_trace(const Grid& g, double t) const;
};

void validate(const BoundaryData& bd, int dim);

}  // namespace hartree
