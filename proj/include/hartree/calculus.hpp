#pragma once

#include "hartree/grid.hpp"

namespace hartree {

enum class NormKind { L2, H1, Grad };

/// Second-order centred differences in the interior, second-order one-sided
/// differences on the axis ends. Result is N x dim.
template <typename Scalar>
GridVectorField<Scalar> gradient(const GridFunction<Scalar>& u, const Grid& g);

/// 3-point / 5-point Laplacian at interior nodes. Boundary entries carry the
/// Dirichlet identity row, i.e. they hold u itself.
template <typename Scalar>
GridFunction<Scalar> laplacian(const GridFunction<Scalar>& u, const Grid& g);

/// Outward normal derivative at every boundary node (3-point one-sided).
/// Corner entries, where the normal is undefined, are zero.
template <typename Scalar>
BoundaryTrace normal_trace(const GridFunction<Scalar>& u, const Grid& g);

template <typename Scalar>
double norm(const GridFunction<Scalar>& u, const Grid& g, NormKind kind);

/// Weighted inner product sum_i w_i conj(a_i) b_i.
template <typename Scalar>
Scalar inner(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b, const Grid& g);

/// Sum of quad_w * |grad|^2 over nodes.
template <typename Scalar>
double gradient_energy(const GridVectorField<Scalar>& grad, const Grid& g);

Complex boundary_integral(const BoundaryTrace& t, const Grid& g);

/// Restriction of a field to the boundary nodes.
template <typename Scalar>
BoundaryTrace boundary_values(const GridFunction<Scalar>& u, const Grid& g);

}  // namespace hartree
