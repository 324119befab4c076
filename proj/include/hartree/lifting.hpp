#pragma once

#include <memory>

#include <Eigen/SparseCore>

#include "hartree/boundary_data.hpp"
#include "hartree/kernel.hpp"

namespace hartree {

/// Extension of the boundary data into the domain at one time, plus its time derivative.
struct Lift {
  ComplexField qtilde;
  ComplexField qtilde_t;
};

/// Discrete harmonic extension of boundary values. The interior Laplacian is
/// factorised once; the factorisation is read-only afterwards and may be shared.
class HarmonicLifter {
 public:
  explicit HarmonicLifter(const Grid& g);

  /// Boundary rows copy the data verbatim; interior rows solve the 3/5-point
  /// Laplace equation.
  ComplexField extend(const BoundaryTrace& data) const;

  const Grid& grid() const noexcept { return grid_; }

 private:
  struct Factor;
  Grid grid_;
  std::vector<Index> interior_slot_;
  std::shared_ptr<const Factor> factor_;
};

Lift harmonic_lift(const BoundaryData& bd, double t, const Grid& g);
Lift harmonic_lift(const BoundaryData& bd, double t, const HarmonicLifter& lifter);

struct CompatibilityReport {
  double max_mismatch = 0.0;
  bool pass = true;
};

CompatibilityReport validate_compatibility(const ComplexField& phi, const BoundaryData& bd, const Grid& g,
                                           double tolerance = 1e-10);

/// Laplacian(Q~) - i Q~_t - f(v + Q~)(v + Q~) at interior nodes, zero on the
/// boundary. `v` must vanish on the boundary.
ComplexField homogenized_source(const ComplexField& v, const Lift& lift, const Grid& g, const KernelSpec& k);
ComplexField homogenized_source(const ComplexField& v, const Lift& lift, const Grid& g, const Convolver& conv);

}  // namespace hartree
