#pragma once

#include "hartree/grid.hpp"

namespace hartree {

/// Vector field agreeing with the outward normal on the boundary faces,
/// together with its divergence eta and grad(eta).
struct XiField {
  std::uint64_t grid_id = 0;
  Eigen::MatrixXd xi;        ///< N x dim
  Eigen::VectorXd eta;       ///< N
  Eigen::MatrixXd grad_eta;  ///< N x dim
  /// d xi_j / d x_j; the componentwise construction has no off-diagonal strain
  Eigen::VectorXd axis_slope;
};

/// Componentwise affine field xi_a(x) = (2 x_a - lo_a - hi_a) / (hi_a - lo_a).
XiField build_xi_field(const Grid& g);

}  // namespace hartree
