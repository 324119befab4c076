#include "hartree/kernel.hpp"

#include <cmath>

namespace hartree {
namespace {

void require_convolver(const Convolver& conv, const Grid& g, const char* what) {
  if (conv.grid_id() != g.id) throw GridMismatch(std::string(what) + ": convolver built for another grid");
}

}  // namespace

HartreePotential hartree_potential(const ComplexField& u, const Grid& g, const Convolver& conv) {
  require_same_grid(u, g, "hartree_potential");
  require_convolver(conv, g, "hartree_potential");
  return {g.id, conv.potential(u.values.cwiseAbs2()), conv.kernel()};
}

HartreePotential hartree_potential(const ComplexField& u, const Grid& g, const KernelSpec& k) {
  return hartree_potential(u, g, Convolver(g, k));
}

ComplexField apply_nonlinearity(const ComplexField& u, const Grid& g, const Convolver& conv) {
  const auto f = hartree_potential(u, g, conv);
  return {g.id, f.values.cast<Complex>().cwiseProduct(u.values)};
}

ComplexField apply_nonlinearity(const ComplexField& u, const Grid& g, const KernelSpec& k) {
  return apply_nonlinearity(u, g, Convolver(g, k));
}

GridVectorField<double> gradient_kernel_convolution(const ComplexField& u, const Grid& g,
                                                    const Convolver& conv) {
  require_same_grid(u, g, "gradient_kernel_convolution");
  require_convolver(conv, g, "gradient_kernel_convolution");
  return {g.id, conv.potential_gradient(u.values.cwiseAbs2())};
}

GridVectorField<double> gradient_kernel_convolution(const ComplexField& u, const Grid& g,
                                                    const KernelSpec& k) {
  return gradient_kernel_convolution(u, g, Convolver(g, k));
}

LipschitzSample lipschitz_probe(const ComplexField& v, const ComplexField& w, const Grid& g,
                                const Convolver& conv) {
  require_same_grid(v, g, "lipschitz_probe");
  require_same_grid(w, g, "lipschitz_probe");
  const ComplexField diff{g.id, apply_nonlinearity(v, g, conv).values - apply_nonlinearity(w, g, conv).values};
  const double nv = norm(v, g, NormKind::H1);
  const double nw = norm(w, g, NormKind::H1);
  const double nd = norm(ComplexField{g.id, v.values - w.values}, g, NormKind::H1);
  LipschitzSample s;
  s.numerator = norm(diff, g, NormKind::H1);
  s.bound_factor = (nv * nv + nw * nw) * nd;
  s.ratio = s.bound_factor > 0.0 ? s.numerator / s.bound_factor : 0.0;
  return s;
}

LipschitzSample lipschitz_probe(const ComplexField& v, const ComplexField& w, const Grid& g,
                                const KernelSpec& k) {
  return lipschitz_probe(v, w, g, Convolver(g, k));
}

double hardy_quotient(const ComplexField& u, const Grid& g, int dim_embed) {
  require_same_grid(u, g, "hardy_quotient");
  if (dim_embed != g.dim) throw PreconditionError("hardy_quotient: dim_embed must equal the box dimension");
  const double scale = u.values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double weighted = 0.0;
  for (Index p = 0; p < g.size(); ++p) {
    const double r2 = g.point(p).squaredNorm();
    if (r2 <= 1e-24) throw PreconditionError("hardy_quotient: a grid node coincides with the origin");
    if (g.on_boundary(p) && std::abs(u.values[p]) > 1e-12 * scale)
      throw PreconditionError("hardy_quotient: field does not vanish on the box boundary");
    weighted += g.quad_w[p] * std::norm(u.values[p]) / r2;
  }
  const double grad = gradient_energy(gradient(u, g), g);
  return weighted / grad;
}

LinftyBound potential_linfty_bound_check(const ComplexField& u, const Grid& g, const Convolver& conv) {
  const auto f = hartree_potential(u, g, conv);
  const double h1 = norm(u, g, NormKind::H1);
  return {f.values.maxCoeff(), h1 * h1};
}

LinftyBound potential_linfty_bound_check(const ComplexField& u, const Grid& g, const KernelSpec& k) {
  return potential_linfty_bound_check(u, g, Convolver(g, k));
}

}  // namespace hartree
