#include "hartree/boundary_data.hpp"

#include <cmath>

namespace hartree {
namespace {

double smoothstep7(double x) {
  const double x2 = x * x;
  return x2 * x2 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

double smoothstep7_derivative(double x) {
  const double y = x * (1.0 - x);
  return 140.0 * y * y * y;
}

}  // namespace

std::string to_string(BoundaryProfile p) {
  switch (p) {
    case BoundaryProfile::Uniform: return "uniform";
    case BoundaryProfile::Left: return "left";
    case BoundaryProfile::Right: return "right";
    case BoundaryProfile::Gaussian: return "gaussian";
  }
  return "uniform";
}

double smooth_window(double t, double t0, double t1) {
  if (t <= t0 || t >= t1) return 0.0;
  const double s = (t - t0) / (t1 - t0);
  return s < 0.5 ? smoothstep7(2.0 * s) : smoothstep7(2.0 - 2.0 * s);
}

double smooth_window_derivative(double t, double t0, double t1) {
  if (t <= t0 || t >= t1) return 0.0;
  const double s = (t - t0) / (t1 - t0);
  const double ds = 1.0 / (t1 - t0);
  return s < 0.5 ? 2.0 * ds * smoothstep7_derivative(2.0 * s)
                 : -2.0 * ds * smoothstep7_derivative(2.0 - 2.0 * s);
}

double BoundaryData::spatial(const Grid& g, Index node) const {
  switch (profile) {
    case BoundaryProfile::Uniform: return 1.0;
    case BoundaryProfile::Left: return g.multi_index(node)[0] == 0 ? 1.0 : 0.0;
    case BoundaryProfile::Right: return g.multi_index(node)[0] == g.n[0] - 1 ? 1.0 : 0.0;
    case BoundaryProfile::Gaussian: {
      const double r2 = (g.point(node) - center).squaredNorm();
      return std::exp(-r2 / (2.0 * sigma * sigma));
    }
  }
  return 0.0;
}

double BoundaryData::spatial_derivative(const Grid& g, Index node, const Point& tangent) const {
  if (profile != BoundaryProfile::Gaussian) return 0.0;
  const Point d = g.point(node) - center;
  return -spatial(g, node) * d.dot(tangent) / (sigma * sigma);
}

Complex BoundaryData::value(const Grid& g, Index node, double t) const {
  const double w = smooth_window(t, t0, t1);
  if (w == 0.0 || amplitude == 0.0) return Complex(0.0);
  return amplitude * w * std::polar(1.0, omega * t) * spatial(g, node);
}

Complex BoundaryData::time_derivative(const Grid& g, Index node, double t) const {
  const double w = smooth_window(t, t0, t1);
  const double dw = smooth_window_derivative(t, t0, t1);
  if ((w == 0.0 && dw == 0.0) || amplitude == 0.0) return Complex(0.0);
  return amplitude * spatial(g, node) * std::polar(1.0, omega * t) * Complex(dw, omega * w);
}

BoundaryTrace BoundaryData::trace(const Grid& g, double t) const {
  BoundaryTrace out{g.id, Eigen::VectorXcd(g.boundary_size())};
  for (Index b = 0; b < g.boundary_size(); ++b) out.values[b] = value(g, g.boundary_idx[b], t);
  return out;
}

BoundaryTrace BoundaryData::trace_t(const Grid& g, double t) const {
  BoundaryTrace out{g.id, Eigen::VectorXcd(g.boundary_size())};
  for (Index b = 0; b < g.boundary_size(); ++b) out.values[b] = time_derivative(g, g.boundary_idx[b], t);
  return out;
}

BoundaryTrace BoundaryData::tangential_trace(const Grid& g, double t) const {
  BoundaryTrace out{g.id, Eigen::VectorXcd::Zero(g.boundary_size())};
  if (g.dim < 2) return out;
  const double w = smooth_window(t, t0, t1);
  if (w == 0.0 || amplitude == 0.0) return out;
  const Complex factor = amplitude * w * std::polar(1.0, omega * t);
  for (Index b = 0; b < g.boundary_size(); ++b) {
    if (g.corner[b]) continue;
    // rotate the 2D normal by 90 degrees
    Point tangent = Point::Zero();
    tangent[0] = -g.outward_normal(b, 1);
    tangent[1] = g.outward_normal(b, 0);
    out.values[b] = factor * spatial_derivative(g, g.boundary_idx[b], tangent);
  }
  return out;
}

void validate(const BoundaryData& bd, int dim) {
  if (!std::isfinite(bd.amplitude)) throw ConfigError("boundary.amplitude must be finite");
  if (!(bd.t0 < bd.t1)) throw ConfigError("boundary window must satisfy t0 < t1");
  if (!std::isfinite(bd.omega)) throw ConfigError("boundary.omega must be finite");
  if (bd.profile == BoundaryProfile::Gaussian && !(bd.sigma > 0.0))
    throw ConfigError("boundary.sigma must be > 0 for the gaussian profile");
  if ((bd.profile == BoundaryProfile::Left || bd.profile == BoundaryProfile::Right) && dim != 1)
    throw ConfigError("boundary.profile left/right is defined for dim=1 only");
}

}  // namespace hartree
