#pragma once

#include <memory>
#include <vector>

#include "hartree/boundary_data.hpp"
#include "hartree/kernel.hpp"
#include "hartree/lifting.hpp"

namespace hartree {

struct StepperConfig {
  double dt = 1e-3;
  double picard_tol = 1e-10;
  int max_iters = 50;

  bool operator==(const StepperConfig&) const = default;
};

void validate(const StepperConfig& cfg);

struct SolverState {
  double t = 0.0;
  ComplexField u;
  int picard_iters = 0;
  /// last successive-difference ratio of the inner loop (0 with a single sweep)
  double contraction_est = 0.0;
  /// H1 norms of successive Picard differences at the last step
  std::vector<double> picard_diffs;
};

/// Interior Crank-Nicolson operator  shift * I - 1/2 Lap + 1/2 diag(V)  on a grid.
/// Tridiagonal elimination in 1D, sparse LU in 2D.
class CnSystem {
 public:
  explicit CnSystem(const Grid& g);
  ~CnSystem();
  CnSystem(CnSystem&&) noexcept;
  CnSystem& operator=(CnSystem&&) noexcept;

  /// `potential` holds one real value per interior node (empty means zero).
  Eigen::VectorXcd solve(Complex shift, const Eigen::VectorXd& potential, const Eigen::VectorXcd& rhs) const;

  /// sum over boundary neighbours of Lap-coefficient * value, per interior node
  Eigen::VectorXcd boundary_coupling(const ComplexField& u) const;

  Eigen::VectorXcd gather_interior(const ComplexField& u) const;
  const Grid& grid() const noexcept { return grid_; }

 private:
  struct Sparse;
  Grid grid_;
  std::vector<Index> interior_slot_;
  std::unique_ptr<Sparse> sparse_;
};

/// Crank-Nicolson in time with the Hartree potential averaged over the two
/// time levels; the nonlinear system is solved by Picard sweeps, each one a
/// linear CN solve with the potential frozen at the previous iterate.
/// Boundary rows are set to Q(., t + dt).
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const Grid& g, const KernelSpec& k, const BoundaryData& bd, const StepperConfig& cfg);

  SolverState step(const SolverState& s) const { return step(s, cfg_.dt); }
  SolverState step(const SolverState& s, double dt) const;

  const Convolver& convolver() const noexcept { return conv_; }
  const StepperConfig& config() const noexcept { return cfg_; }

 private:
  Grid grid_;
  BoundaryData bd_;
  StepperConfig cfg_;
  Convolver conv_;
  CnSystem system_;
};

SolverState step(const SolverState& state, const StepperConfig& cfg, const BoundaryData& bd, const Grid& g,
                 const KernelSpec& k);

/// The same scheme written for v = u - Q~ with a fixed lifting, homogeneous
/// boundary rows and the lift entering through the source. Algebraically the
/// u-form step shifted by the lift.
class HomogenizedStepper {
 public:
  HomogenizedStepper(const Grid& g, const KernelSpec& k, const BoundaryData& bd, const StepperConfig& cfg);

  SolverState step(const SolverState& v) const;
  const HarmonicLifter& lifter() const noexcept { return lifter_; }

 private:
  Grid grid_;
  BoundaryData bd_;
  StepperConfig cfg_;
  Convolver conv_;
  CnSystem system_;
  HarmonicLifter lifter_;
};

}  // namespace hartree
