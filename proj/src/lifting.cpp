#include "hartree/lifting.hpp"

#include <Eigen/SparseCholesky>

#include "hartree/calculus.hpp"

namespace hartree {

struct HarmonicLifter::Factor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

HarmonicLifter::HarmonicLifter(const Grid& g) : grid_(g), interior_slot_(static_cast<std::size_t>(g.size()), -1) {
  const Index ni = static_cast<Index>(g.interior_idx.size());
  for (Index r = 0; r < ni; ++r) interior_slot_[g.interior_idx[r]] = r;

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(ni * (1 + 2 * g.dim)));
  for (Index r = 0; r < ni; ++r) {
    const Index p = g.interior_idx[r];
    double diag = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double c = 1.0 / (g.h[a] * g.h[a]);
      diag += 2.0 * c;
      for (Index q : {p - g.stride[a], p + g.stride[a]}) {
        if (interior_slot_[q] >= 0) entries.emplace_back(r, interior_slot_[q], -c);
      }
    }
    entries.emplace_back(r, r, diag);
  }
  Eigen::SparseMatrix<double> a(ni, ni);
  a.setFromTriplets(entries.begin(), entries.end());
  auto f = std::make_shared<Factor>();
  f->ldlt.compute(a);
  if (f->ldlt.info() != Eigen::Success) throw SolverError("harmonic lift: Laplacian factorisation failed");
  factor_ = std::move(f);
}

ComplexField HarmonicLifter::extend(const BoundaryTrace& data) const {
  require_same_grid(data, grid_, "harmonic lift");
  const Grid& g = grid_;
  ComplexField out = zeros<Complex>(g);
  for (Index b = 0; b < g.boundary_size(); ++b) out.values[g.boundary_idx[b]] = data.values[b];

  const Index ni = static_cast<Index>(g.interior_idx.size());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, 2);
  for (Index r = 0; r < ni; ++r) {
    const Index p = g.interior_idx[r];
    for (int a = 0; a < g.dim; ++a) {
      const double c = 1.0 / (g.h[a] * g.h[a]);
      for (Index q : {p - g.stride[a], p + g.stride[a]}) {
        if (interior_slot_[q] < 0) {
          rhs(r, 0) += c * out.values[q].real();
          rhs(r, 1) += c * out.values[q].imag();
        }
      }
    }
  }
  const Eigen::MatrixXd sol = factor_->ldlt.solve(rhs);
  if (factor_->ldlt.info() != Eigen::Success) throw SolverError("harmonic lift: solve failed");
  for (Index r = 0; r < ni; ++r) out.values[g.interior_idx[r]] = Complex(sol(r, 0), sol(r, 1));
  return out;
}

Lift harmonic_lift(const BoundaryData& bd, double t, const HarmonicLifter& lifter) {
  const Grid& g = lifter.grid();
  return {lifter.extend(bd.trace(g, t)), lifter.extend(bd.trace_t(g, t))};
}

Lift harmonic_lift(const BoundaryData& bd, double t, const Grid& g) {
  return harmonic_lift(bd, t, HarmonicLifter(g));
}

CompatibilityReport validate_compatibility(const ComplexField& phi, const BoundaryData& bd, const Grid& g,
                                           double tolerance) {
  require_same_grid(phi, g, "validate_compatibility");
  CompatibilityReport rep;
  for (Index b = 0; b < g.boundary_size(); ++b) {
    const Index p = g.boundary_idx[b];
    rep.max_mismatch = std::max(rep.max_mismatch, std::abs(phi.values[p] - bd.value(g, p, 0.0)));
  }
  rep.pass = rep.max_mismatch <= tolerance;
  return rep;
}

ComplexField homogenized_source(const ComplexField& v, const Lift& lift, const Grid& g, const Convolver& conv) {
  require_same_grid(v, g, "homogenized_source");
  require_same_grid(lift.qtilde, g, "homogenized_source");
  require_same_grid(lift.qtilde_t, g, "homogenized_source");
  for (Index p : g.boundary_idx) {
    if (std::abs(v.values[p]) > 1e-12)
      throw PreconditionError("homogenized_source: v must vanish on the boundary");
  }
  const ComplexField u{g.id, v.values + lift.qtilde.values};
  const ComplexField nonlinear = apply_nonlinearity(u, g, conv);
  const ComplexField lap = laplacian(lift.qtilde, g);
  ComplexField out = zeros<Complex>(g);
  const Complex i(0.0, 1.0);
  for (Index p : g.interior_idx)
    out.values[p] = lap.values[p] - i * lift.qtilde_t.values[p] - nonlinear.values[p];
  return out;
}

ComplexField homogenized_source(const ComplexField& v, const Lift& lift, const Grid& g, const KernelSpec& k) {
  return homogenized_source(v, lift, g, Convolver(g, k));
}

}  // namespace hartree
