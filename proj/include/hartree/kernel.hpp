#pragma once

#include "hartree/calculus.hpp"
#include "hartree/convolution.hpp"

namespace hartree {

/// f(u) = k * |u|^2 sampled on the grid.
struct HartreePotential {
  std::uint64_t grid_id = 0;
  Eigen::VectorXd values;
  KernelSpec kernel;
};

HartreePotential hartree_potential(const ComplexField& u, const Grid& g, const KernelSpec& k);
HartreePotential hartree_potential(const ComplexField& u, const Grid& g, const Convolver& conv);

/// f(u) u, pointwise.
ComplexField apply_nonlinearity(const ComplexField& u, const Grid& g, const KernelSpec& k);
ComplexField apply_nonlinearity(const ComplexField& u, const Grid& g, const Convolver& conv);

/// (grad k) * |u|^2, i.e. grad f(u) with the analytic kernel gradient. N x dim.
GridVectorField<double> gradient_kernel_convolution(const ComplexField& u, const Grid& g,
                                                    const KernelSpec& k);
GridVectorField<double> gradient_kernel_convolution(const ComplexField& u, const Grid& g,
                                                    const Convolver& conv);

struct LipschitzSample {
  double numerator = 0.0;     ///< ||f(v)v - f(w)w||_H1
  double bound_factor = 0.0;  ///< (||v||^2 + ||w||^2) ||v - w||, H1 norms
  double ratio = 0.0;         ///< numerator / bound_factor, 0 when the factor vanishes
};

LipschitzSample lipschitz_probe(const ComplexField& v, const ComplexField& w, const Grid& g,
                                const KernelSpec& k);
LipschitzSample lipschitz_probe(const ComplexField& v, const ComplexField& w, const Grid& g,
                                const Convolver& conv);

/// sum w |u|^2 / |x|^2 divided by ||grad u||^2 on a box around the origin.
/// `dim_embed` must match the grid dimension; the field must vanish on the box
/// boundary and no node may sit at the origin. Zero field gives 0.
double hardy_quotient(const ComplexField& u, const Grid& g, int dim_embed);

struct LinftyBound {
  double lhs = 0.0;  ///< max f(u)
  double rhs = 0.0;  ///< ||u||_H1^2
};

LinftyBound potential_linfty_bound_check(const ComplexField& u, const Grid& g, const KernelSpec& k);
LinftyBound potential_linfty_bound_check(const ComplexField& u, const Grid& g, const Convolver& conv);

}  // namespace hartree
