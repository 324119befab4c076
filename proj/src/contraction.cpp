#include "hartree/contraction.hpp"

#include <algorithm>

#include "hartree/lifting.hpp"
#include "hartree/stepper.hpp"

namespace hartree {

ContractionReport contraction_probe(const ComplexField& psi, const BoundaryData& bd, const Grid& g,
                                    const KernelSpec& k, double T0, double M, int n_iter, int substeps) {
  require_same_grid(psi, g, "contraction_probe");
  if (!(T0 > 0.0) || substeps < 1 || n_iter < 1) throw PreconditionError("contraction_probe: need T0 > 0, substeps >= 1, n_iter >= 1");
  for (Index p : g.boundary_idx) {
    if (std::abs(psi.values[p]) > 1e-12) throw PreconditionError("contraction_probe: psi must vanish on the boundary");
  }
  if (norm(psi, g, NormKind::H1) > M) throw PreconditionError("contraction_probe: psi lies outside the ball of radius M");

  const Convolver conv(g, k);
  const HarmonicLifter lifter(g);
  const CnSystem system(g);
  const double dt = T0 / substeps;
  const Complex shift(0.0, 1.0 / dt);

  std::vector<Lift> lifts;
  lifts.reserve(static_cast<std::size_t>(substeps + 1));
  for (int m = 0; m <= substeps; ++m) lifts.push_back(harmonic_lift(bd, m * dt, lifter));

  std::vector<ComplexField> current(static_cast<std::size_t>(substeps + 1), zeros<Complex>(g));
  ContractionReport rep;
  for (int it = 0; it < n_iter; ++it) {
    std::vector<ComplexField> source;
    source.reserve(current.size());
    for (int m = 0; m <= substeps; ++m) source.push_back(homogenized_source(current[m], lifts[m], g, conv));

    std::vector<ComplexField> next;
    next.reserve(current.size());
    next.push_back(psi);
    for (int m = 0; m < substeps; ++m) {
      const ComplexField& w = next.back();
      const ComplexField lap = laplacian(w, g);
      Eigen::VectorXcd rhs(static_cast<Index>(g.interior_idx.size()));
      for (Index r = 0; r < rhs.size(); ++r) {
        const Index p = g.interior_idx[r];
        rhs[r] = shift * w.values[p] + 0.5 * lap.values[p] + 0.5 * (source[m].values[p] + source[m + 1].values[p]);
      }
      const Eigen::VectorXcd x = system.solve(shift, Eigen::VectorXd(), rhs);
      ComplexField w_next = zeros<Complex>(g);
      for (Index r = 0; r < x.size(); ++r) w_next.values[g.interior_idx[r]] = x[r];
      next.push_back(std::move(w_next));
    }

    double dist = 0.0;
    double sup = 0.0;
    for (int m = 0; m <= substeps; ++m) {
      dist = std::max(dist, norm(ComplexField{g.id, next[m].values - current[m].values}, g, NormKind::H1));
      sup = std::max(sup, norm(next[m], g, NormKind::H1));
    }
    rep.max_norm = std::max(rep.max_norm, sup);
    if (sup > M) {
      rep.escaped = true;
      break;
    }
    if (!rep.distances.empty()) {
      const double prev = rep.distances.back();
      rep.factors.push_back(prev > 0.0 ? dist / prev : 0.0);
    }
    rep.distances.push_back(dist);
    current = std::move(next);
    if (dist <= 1e-13 * (1.0 + sup)) break;
  }
  for (double f : rep.factors) rep.factor_est = std::max(rep.factor_est, f);
  return rep;
}

}  // namespace hartree
