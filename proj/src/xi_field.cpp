#include "hartree/xi_field.hpp"

namespace hartree {

XiField build_xi_field(const Grid& g) {
  XiField f;
  f.grid_id = g.id;
  f.xi.resize(g.size(), g.dim);
  f.grad_eta = Eigen::MatrixXd::Zero(g.size(), g.dim);
  f.axis_slope.resize(g.dim);
  double eta = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    f.axis_slope[a] = 2.0 / (g.hi[a] - g.lo[a]);
    eta += f.axis_slope[a];
  }
  for (Index p = 0; p < g.size(); ++p) {
    const auto m = g.multi_index(p);
    for (int a = 0; a < g.dim; ++a) {
      // exact +-1 on the faces instead of relying on the affine formula's rounding
      if (m[a] == 0) {
        f.xi(p, a) = -1.0;
      } else if (m[a] == g.n[a] - 1) {
        f.xi(p, a) = 1.0;
      } else {
        const double x = g.point(p)[a];
        f.xi(p, a) = (2.0 * x - g.lo[a] - g.hi[a]) / (g.hi[a] - g.lo[a]);
      }
    }
  }
  f.eta = Eigen::VectorXd::Constant(g.size(), eta);
  return f;
}

}  // namespace hartree
