#include "hartree/grid.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace hartree {
namespace {

std::uint64_t next_grid_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

Eigen::VectorXd trapezoid_weights(Index n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  w[0] = w[n - 1] = 0.5 * h;
  return w;
}

Grid assemble(int dim, const std::array<double, 3>& lo, const std::array<double, 3>& hi,
              const std::array<Index, 3>& n) {
  Grid g;
  g.dim = dim;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  for (int a = 0; a < 3; ++a) g.h[a] = a < dim ? (hi[a] - lo[a]) / static_cast<double>(n[a] - 1) : 0.0;
  g.stride = {1, n[0], n[0] * n[1]};

  std::array<Eigen::VectorXd, 3> w1;
  for (int a = 0; a < 3; ++a)
    w1[a] = a < dim ? trapezoid_weights(n[a], g.h[a]) : Eigen::VectorXd::Ones(1);

  const Index total = g.size();
  g.quad_w.resize(total);
  g.boundary_slot.assign(static_cast<std::size_t>(total), -1);
  for (Index p = 0; p < total; ++p) {
    const auto m = g.multi_index(p);
    g.quad_w[p] = w1[0][m[0]] * w1[1][m[1]] * w1[2][m[2]];
    bool boundary = false;
    for (int a = 0; a < dim; ++a) boundary = boundary || m[a] == 0 || m[a] == n[a] - 1;
    if (boundary) {
      g.boundary_slot[p] = static_cast<Index>(g.boundary_idx.size());
      g.boundary_idx.push_back(p);
    } else {
      g.interior_idx.push_back(p);
    }
  }

  const Index nb = g.boundary_size();
  g.boundary_quad_w = Eigen::VectorXd::Zero(nb);
  g.outward_normal = Eigen::MatrixXd::Zero(nb, dim);
  g.corner.assign(static_cast<std::size_t>(nb), false);
  for (Index b = 0; b < nb; ++b) {
    const auto m = g.multi_index(g.boundary_idx[b]);
    int faces = 0;
    for (int a = 0; a < dim; ++a) {
      if (m[a] == 0) {
        g.outward_normal(b, a) = -1.0;
        ++faces;
      } else if (m[a] == n[a] - 1) {
        g.outward_normal(b, a) = 1.0;
        ++faces;
      }
    }
    g.outward_normal.row(b).normalize();
    g.corner[b] = faces > 1;
  }

  if (dim == 1) {
    // counting measure on the two endpoints
    g.boundary_quad_w.setOnes();
  } else if (dim == 2) {
    // Trapezoid along each face with corners dropped; the half-cell a corner
    // would carry is given to its face neighbour so constants integrate exactly.
    for (Index b = 0; b < nb; ++b) {
      if (g.corner[b]) continue;
      const auto m = g.multi_index(g.boundary_idx[b]);
      const int normal_axis = (m[0] == 0 || m[0] == n[0] - 1) ? 0 : 1;
      const int along = 1 - normal_axis;
      double w = g.h[along];
      if (m[along] == 1) w += 0.5 * g.h[along];
      if (m[along] == n[along] - 2) w += 0.5 * g.h[along];
      g.boundary_quad_w[b] = w;
    }
  }
  g.id = next_grid_id();
  return g;
}

}  // namespace

double Grid::measure() const noexcept {
  double m = 1.0;
  for (int a = 0; a < dim; ++a) m *= hi[a] - lo[a];
  return m;
}

Point Grid::point(Index node) const noexcept {
  const auto m = multi_index(node);
  Point x = Point::Zero();
  for (int a = 0; a < dim; ++a) {
    // pin the last node to hi exactly
    x[a] = m[a] == n[a] - 1 ? hi[a] : lo[a] + static_cast<double>(m[a]) * h[a];
  }
  return x;
}

Grid build_grid(int dim, const std::vector<std::array<double, 2>>& extents,
                const std::vector<Index>& n) {
  if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
  if (extents.size() != static_cast<std::size_t>(dim) || n.size() != static_cast<std::size_t>(dim))
    throw ConfigError("grid: expected one extent and one node count per axis");
  std::array<double, 3> lo{}, hi{};
  std::array<Index, 3> counts{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4) throw ConfigError("grid: need at least 4 nodes per axis, got " + std::to_string(n[a]));
    if (!(extents[a][0] < extents[a][1]) || !std::isfinite(extents[a][0]) || !std::isfinite(extents[a][1]))
      throw ConfigError("grid: extent must satisfy a < b on every axis");
    lo[a] = extents[a][0];
    hi[a] = extents[a][1];
    counts[a] = n[a];
  }
  return assemble(dim, lo, hi, counts);
}

Grid build_probe_box(int dim, double half_width, Index n) {
  if (dim < 1 || dim > 3) throw ConfigError("probe box dimension must be 1, 2 or 3");
  if (n < 4) throw ConfigError("probe box needs at least 4 nodes per axis");
  if (!(half_width > 0.0)) throw ConfigError("probe box half width must be positive");
  const double h = 2.0 * half_width / static_cast<double>(n - 1);
  // an odd node count would put a node on the origin
  const double shift = n % 2 == 1 ? 0.5 * h : 0.0;
  std::array<double, 3> lo{}, hi{};
  std::array<Index, 3> counts{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    lo[a] = -half_width + shift;
    hi[a] = half_width + shift;
    counts[a] = n;
  }
  return assemble(dim, lo, hi, counts);
}

}  // namespace hartree
