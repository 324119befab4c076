#include "hartree/calculus.hpp"

#include <cmath>

namespace hartree {
namespace {

template <typename Scalar>
Scalar axis_derivative(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, const Grid& g, Index p,
                       const std::array<Index, 3>& m, int axis) {
  const Index s = g.stride[axis];
  const double h = g.h[axis];
  const Index last = g.n[axis] - 1;
  if (m[axis] == 0) return (-3.0 * v[p] + 4.0 * v[p + s] - v[p + 2 * s]) / (2.0 * h);
  if (m[axis] == last) return (3.0 * v[p] - 4.0 * v[p - s] + v[p - 2 * s]) / (2.0 * h);
  return (v[p + s] - v[p - s]) / (2.0 * h);
}

}  // namespace

template <typename Scalar>
GridVectorField<Scalar> gradient(const GridFunction<Scalar>& u, const Grid& g) {
  require_same_grid(u, g, "gradient");
  GridVectorField<Scalar> out{g.id, Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(g.size(), g.dim)};
  for (Index p = 0; p < g.size(); ++p) {
    const auto m = g.multi_index(p);
    for (int a = 0; a < g.dim; ++a) out.values(p, a) = axis_derivative(u.values, g, p, m, a);
  }
  return out;
}

template <typename Scalar>
GridFunction<Scalar> laplacian(const GridFunction<Scalar>& u, const Grid& g) {
  require_same_grid(u, g, "laplacian");
  GridFunction<Scalar> out{g.id, u.values};
  for (Index p : g.interior_idx) {
    Scalar acc(0);
    for (int a = 0; a < g.dim; ++a) {
      const Index s = g.stride[a];
      acc += (u.values[p + s] - 2.0 * u.values[p] + u.values[p - s]) / (g.h[a] * g.h[a]);
    }
    out.values[p] = acc;
  }
  return out;
}

template <typename Scalar>
BoundaryTrace normal_trace(const GridFunction<Scalar>& u, const Grid& g) {
  require_same_grid(u, g, "normal_trace");
  BoundaryTrace out{g.id, Eigen::VectorXcd::Zero(g.boundary_size())};
  for (Index b = 0; b < g.boundary_size(); ++b) {
    if (g.corner[b]) continue;
    const Index p = g.boundary_idx[b];
    const auto m = g.multi_index(p);
    for (int a = 0; a < g.dim; ++a) {
      const double na = g.outward_normal(b, a);
      if (na != 0.0) out.values[b] = na * Complex(axis_derivative(u.values, g, p, m, a));
    }
  }
  return out;
}

template <typename Scalar>
double gradient_energy(const GridVectorField<Scalar>& grad, const Grid& g) {
  if (grad.grid_id != g.id || grad.values.rows() != g.size())
    throw GridMismatch("gradient_energy: field is not bound to this grid");
  return g.quad_w.dot(grad.values.cwiseAbs2().rowwise().sum());
}

template <typename Scalar>
double norm(const GridFunction<Scalar>& u, const Grid& g, NormKind kind) {
  require_same_grid(u, g, "norm");
  const double l2sq = kind == NormKind::Grad ? 0.0 : g.quad_w.dot(u.values.cwiseAbs2());
  const double gradsq = kind == NormKind::L2 ? 0.0 : gradient_energy(gradient(u, g), g);
  return std::sqrt(l2sq + gradsq);
}

template <typename Scalar>
Scalar inner(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b, const Grid& g) {
  require_same_grid(a, g, "inner");
  require_same_grid(b, g, "inner");
  Scalar acc(0);
  for (Index p = 0; p < g.size(); ++p) {
    if constexpr (std::is_same_v<Scalar, Complex>) {
      acc += g.quad_w[p] * std::conj(a.values[p]) * b.values[p];
    } else {
      acc += g.quad_w[p] * a.values[p] * b.values[p];
    }
  }
  return acc;
}

Complex boundary_integral(const BoundaryTrace& t, const Grid& g) {
  require_same_grid(t, g, "boundary_integral");
  Complex acc(0.0);
  for (Index b = 0; b < g.boundary_size(); ++b) acc += g.boundary_quad_w[b] * t.values[b];
  return acc;
}

template <typename Scalar>
BoundaryTrace boundary_values(const GridFunction<Scalar>& u, const Grid& g) {
  require_same_grid(u, g, "boundary_values");
  BoundaryTrace out{g.id, Eigen::VectorXcd(g.boundary_size())};
  for (Index b = 0; b < g.boundary_size(); ++b) out.values[b] = Complex(u.values[g.boundary_idx[b]]);
  return out;
}

#define HARTREE_INSTANTIATE(S)                                                               \
  template GridVectorField<S> gradient(const GridFunction<S>&, const Grid&);                \
  template GridFunction<S> laplacian(const GridFunction<S>&, const Grid&);                  \
  template BoundaryTrace normal_trace(const GridFunction<S>&, const Grid&);                 \
  template double norm(const GridFunction<S>&, const Grid&, NormKind);                      \
  template S inner(const GridFunction<S>&, const GridFunction<S>&, const Grid&);            \
  template double gradient_energy(const GridVectorField<S>&, const Grid&);                  \
  template BoundaryTrace boundary_values(const GridFunction<S>&, const Grid&);

HARTREE_INSTANTIATE(double)
HARTREE_INSTANTIATE(Complex)
#undef HARTREE_INSTANTIATE

}  // namespace hartree
