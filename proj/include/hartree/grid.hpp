#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hartree/errors.hpp"

namespace hartree {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Point = Eigen::Vector3d;

/// Uniform tensor-product grid on an interval, a rectangle, or (probes only) a box.
///
/// Nodes are numbered with the x index fastest. Boundary nodes are listed in
/// ascending node order; every per-boundary-node array uses that order.
struct Grid {
  int dim = 0;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  std::array<Index, 3> n{1, 1, 1};
  std::array<double, 3> h{};
  std::array<Index, 3> stride{1, 1, 1};

  std::vector<Index> interior_idx;
  std::vector<Index> boundary_idx;
  /// node -> position in boundary_idx, or -1 for interior nodes
  std::vector<Index> boundary_slot;

  Eigen::VectorXd quad_w;
  Eigen::VectorXd boundary_quad_w;
  /// one row per boundary node, `dim` columns, unit length
  Eigen::MatrixXd outward_normal;
  /// true where the outward normal is undefined (2D corners)
  std::vector<bool> corner;

  std::uint64_t id = 0;

  Index size() const noexcept { return n[0] * n[1] * n[2]; }
  Index boundary_size() const noexcept { return static_cast<Index>(boundary_idx.size()); }
  double measure() const noexcept;

  std::array<Index, 3> multi_index(Index node) const noexcept {
    return {node % n[0], (node / n[0]) % n[1], node / (n[0] * n[1])};
  }
  Index node(Index i, Index j = 0, Index k = 0) const noexcept {
    return i + n[0] * (j + n[1] * k);
  }
  Point point(Index node) const noexcept;
  bool on_boundary(Index node) const noexcept { return boundary_slot[node] >= 0; }
};

/// Grid for the solver: dim 1 or 2, at least four nodes and a < b per axis.
Grid build_grid(int dim, const std::vector<std::array<double, 2>>& extents,
                const std::vector<Index>& n);

/// Box [-L, L]^dim shifted by half a cell so no node sits at the origin.
Grid build_probe_box(int dim, double half_width, Index n);

/// Complex or real values per grid node, bound to the grid that produced them.
template <typename Scalar>
struct GridFunction {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::uint64_t grid_id = 0;
  Vector values;

  Index size() const noexcept { return values.size(); }
};

using ComplexField = GridFunction<Complex>;
using RealField = GridFunction<double>;

/// Per-node vectors stored as an N x dim matrix.
template <typename Scalar>
struct GridVectorField {
  std::uint64_t grid_id = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;
};

/// Complex values per boundary node.
struct BoundaryTrace {
  std::uint64_t grid_id = 0;
  Eigen::VectorXcd values;
};

template <typename Scalar>
GridFunction<Scalar> zeros(const Grid& g) {
  return {g.id, GridFunction<Scalar>::Vector::Zero(g.size())};
}

template <typename Scalar, typename Fn>
GridFunction<Scalar> sample(const Grid& g, Fn&& fn) {
  GridFunction<Scalar> out{g.id, typename GridFunction<Scalar>::Vector(g.size())};
  for (Index p = 0; p < g.size(); ++p) out.values[p] = static_cast<Scalar>(fn(g.point(p)));
  return out;
}

inline void require_same_grid(std::uint64_t field_grid, Index field_size, const Grid& g,
                              const char* what) {
  if (field_grid != g.id || field_size != g.size())
    throw GridMismatch(std::string(what) + ": field is not bound to this grid");
}

template <typename Scalar>
void require_same_grid(const GridFunction<Scalar>& f, const Grid& g, const char* what) {
  require_same_grid(f.grid_id, f.size(), g, what);
}

inline void require_same_grid(const BoundaryTrace& t, const Grid& g, const char* what) {
  if (t.grid_id != g.id || t.values.size() != g.boundary_size())
    throw GridMismatch(std::string(what) + ": trace is not bound to this grid");
}

}  // namespace hartree
