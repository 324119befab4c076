#include "hartree/stepper.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "hartree/calculus.hpp"

namespace hartree {

void validate(const StepperConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("stepper.dt must be > 0");
  if (!(cfg.picard_tol > 0.0)) throw ConfigError("stepper.picard_tol must be > 0");
  if (cfg.max_iters < 2) throw ConfigError("stepper.max_iters must be >= 2");
}

struct CnSystem::Sparse {
  Eigen::SparseMatrix<Complex> matrix;
  std::vector<Complex*> diagonal;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
};

CnSystem::CnSystem(const Grid& g) : grid_(g), interior_slot_(static_cast<std::size_t>(g.size()), -1) {
  const Index ni = static_cast<Index>(g.interior_idx.size());
  for (Index r = 0; r < ni; ++r) interior_slot_[g.interior_idx[r]] = r;
  if (g.dim == 1) return;

  sparse_ = std::make_unique<Sparse>();
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Index r = 0; r < ni; ++r) {
    const Index p = g.interior_idx[r];
    double diag = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double c = 1.0 / (g.h[a] * g.h[a]);
      diag += c;
      for (Index q : {p - g.stride[a], p + g.stride[a]}) {
        if (interior_slot_[q] >= 0) entries.emplace_back(r, interior_slot_[q], Complex(-0.5 * c));
      }
    }
    entries.emplace_back(r, r, Complex(diag));
  }
  auto& sp = *sparse_;
  sp.matrix.resize(ni, ni);
  sp.matrix.setFromTriplets(entries.begin(), entries.end());
  sp.matrix.makeCompressed();
  sp.diagonal.resize(static_cast<std::size_t>(ni));
  for (Index r = 0; r < ni; ++r) sp.diagonal[r] = &sp.matrix.coeffRef(r, r);
  sp.lu.analyzePattern(sp.matrix);
}

CnSystem::~CnSystem() = default;
CnSystem::CnSystem(CnSystem&&) noexcept = default;
CnSystem& CnSystem::operator=(CnSystem&&) noexcept = default;

Eigen::VectorXcd CnSystem::gather_interior(const ComplexField& u) const {
  Eigen::VectorXcd x(static_cast<Index>(grid_.interior_idx.size()));
  for (Index r = 0; r < x.size(); ++r) x[r] = u.values[grid_.interior_idx[r]];
  return x;
}

Eigen::VectorXcd CnSystem::boundary_coupling(const ComplexField& u) const {
  const Grid& g = grid_;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Index>(g.interior_idx.size()));
  for (Index r = 0; r < out.size(); ++r) {
    const Index p = g.interior_idx[r];
    for (int a = 0; a < g.dim; ++a) {
      const double c = 1.0 / (g.h[a] * g.h[a]);
      for (Index q : {p - g.stride[a], p + g.stride[a]}) {
        if (interior_slot_[q] < 0) out[r] += c * u.values[q];
      }
    }
  }
  return out;
}

Eigen::VectorXcd CnSystem::solve(Complex shift, const Eigen::VectorXd& potential, const Eigen::VectorXcd& rhs) const {
  const Index ni = rhs.size();
  const bool has_v = potential.size() == ni;
  if (!sparse_) {
    // Thomas elimination; off-diagonals are all -1/(2h^2)
    const double c = 1.0 / (grid_.h[0] * grid_.h[0]);
    const Complex off(-0.5 * c);
    Eigen::VectorXcd cprime(ni), x(ni);
    Complex denom = shift + c + (has_v ? 0.5 * potential[0] : 0.0);
    cprime[0] = off / denom;
    x[0] = rhs[0] / denom;
    for (Index r = 1; r < ni; ++r) {
      denom = shift + c + (has_v ? 0.5 * potential[r] : 0.0) - off * cprime[r - 1];
      cprime[r] = off / denom;
      x[r] = (rhs[r] - off * x[r - 1]) / denom;
    }
    for (Index r = ni - 2; r >= 0; --r) x[r] -= cprime[r] * x[r + 1];
    return x;
  }
  auto& sp = *sparse_;
  for (Index r = 0; r < ni; ++r) {
    double lap = 0.0;
    for (int a = 0; a < grid_.dim; ++a) lap += 1.0 / (grid_.h[a] * grid_.h[a]);
    *sp.diagonal[r] = shift + lap + (has_v ? 0.5 * potential[r] : 0.0);
  }
  sp.lu.factorize(sp.matrix);
  if (sp.lu.info() != Eigen::Success) throw SolverError("Crank-Nicolson system: factorisation failed");
  Eigen::VectorXcd x = sp.lu.solve(rhs);
  if (sp.lu.info() != Eigen::Success) throw SolverError("Crank-Nicolson system: solve failed");
  return x;
}

namespace {

Eigen::VectorXd interior_of(const Eigen::VectorXd& full, const Grid& g) {
  Eigen::VectorXd out(static_cast<Index>(g.interior_idx.size()));
  for (Index r = 0; r < out.size(); ++r) out[r] = full[g.interior_idx[r]];
  return out;
}

Eigen::VectorXcd interior_of(const Eigen::VectorXcd& full, const Grid& g) {
  Eigen::VectorXcd out(static_cast<Index>(g.interior_idx.size()));
  for (Index r = 0; r < out.size(); ++r) out[r] = full[g.interior_idx[r]];
  return out;
}

/// Shared Picard driver. `shifted(x)` maps the unknown to the field whose
/// density feeds the potential; `rhs_for(V)` builds the right-hand side for a
/// frozen interior potential V.
template <typename Shifted, typename Rhs>
SolverState picard(const Grid& g, const CnSystem& system, const Convolver& conv, const StepperConfig& cfg,
                   Complex shift, const Eigen::VectorXd& f_old, ComplexField iterate, double t_new,
                   Shifted&& shifted, Rhs&& rhs_for) {
  SolverState out;
  out.t = t_new;
  double prev_diff = 0.0;
  double ratio = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Eigen::VectorXd f_k = conv.potential(shifted(iterate).cwiseAbs2());
    const Eigen::VectorXd v_half = interior_of(Eigen::VectorXd(0.5 * (f_k + f_old)), g);
    const Eigen::VectorXcd x = system.solve(shift, v_half, rhs_for(v_half));
    ComplexField next = iterate;
    for (Index r = 0; r < x.size(); ++r) next.values[g.interior_idx[r]] = x[r];

    const double diff = norm(ComplexField{g.id, next.values - iterate.values}, g, NormKind::H1);
    const double size = norm(next, g, NormKind::H1);
    if (k > 1) ratio = prev_diff > 0.0 ? diff / prev_diff : 0.0;
    out.picard_diffs.push_back(diff);
    prev_diff = diff;
    iterate = std::move(next);
    if (!std::isfinite(diff)) throw PicardDivergence(t_new, k, ratio);
    if (diff == 0.0 || diff <= cfg.picard_tol * size) {
      out.u = std::move(iterate);
      out.picard_iters = k;
      out.contraction_est = ratio;
      return out;
    }
  }
  throw PicardDivergence(t_new, cfg.max_iters, ratio);
}

}  // namespace

CrankNicolsonStepper::CrankNicolsonStepper(const Grid& g, const KernelSpec& k, const BoundaryData& bd,
                                           const StepperConfig& cfg)
    : grid_(g), bd_(bd), cfg_(cfg), conv_(g, k), system_(g) {
  validate(cfg);
  validate(bd, g.dim);
}

SolverState CrankNicolsonStepper::step(const SolverState& s, double dt) const {
  const Grid& g = grid_;
  require_same_grid(s.u, g, "step");
  const double t_new = s.t + dt;
  const Complex shift(0.0, 1.0 / dt);

  ComplexField predictor = s.u;
  for (Index p : g.boundary_idx) predictor.values[p] = bd_.value(g, p, t_new);

  const Eigen::VectorXd f_old = conv_.potential(s.u.values.cwiseAbs2());
  const Eigen::VectorXcd u_old = interior_of(s.u.values, g);
  const Eigen::VectorXcd base =
      shift * u_old + 0.5 * interior_of(laplacian(s.u, g).values, g) + 0.5 * system_.boundary_coupling(predictor);

  return picard(
      g, system_, conv_, cfg_, shift, f_old, std::move(predictor), t_new,
      [](const ComplexField& u) -> const Eigen::VectorXcd& { return u.values; },
      [&](const Eigen::VectorXd& v_half) -> Eigen::VectorXcd {
        return base - 0.5 * v_half.cast<Complex>().cwiseProduct(u_old);
      });
}

SolverState step(const SolverState& state, const StepperConfig& cfg, const BoundaryData& bd, const Grid& g,
                 const KernelSpec& k) {
  return CrankNicolsonStepper(g, k, bd, cfg).step(state);
}

HomogenizedStepper::HomogenizedStepper(const Grid& g, const KernelSpec& k, const BoundaryData& bd,
                                       const StepperConfig& cfg)
    : grid_(g), bd_(bd), cfg_(cfg), conv_(g, k), system_(g), lifter_(g) {
  validate(cfg);
  validate(bd, g.dim);
}

SolverState HomogenizedStepper::step(const SolverState& s) const {
  const Grid& g = grid_;
  require_same_grid(s.u, g, "homogenized step");
  for (Index p : g.boundary_idx) {
    if (std::abs(s.u.values[p]) > 1e-12) throw PreconditionError("homogenized step: v must vanish on the boundary");
  }
  const double dt = cfg_.dt;
  const double t_new = s.t + dt;
  const Complex shift(0.0, 1.0 / dt);

  const ComplexField lift_old = lifter_.extend(bd_.trace(g, s.t));
  const ComplexField lift_new = lifter_.extend(bd_.trace(g, t_new));

  const Eigen::VectorXd f_old = conv_.potential((s.u.values + lift_old.values).cwiseAbs2());
  const Eigen::VectorXcd v_old = interior_of(s.u.values, g);
  const Eigen::VectorXcd lifts = interior_of(Eigen::VectorXcd(lift_new.values + lift_old.values), g);
  const ComplexField lift_sum{g.id, lift_new.values + lift_old.values};
  const Eigen::VectorXcd base = shift * v_old + 0.5 * interior_of(laplacian(s.u, g).values, g) +
                                0.5 * interior_of(laplacian(lift_sum, g).values, g) -
                                shift * interior_of(Eigen::VectorXcd(lift_new.values - lift_old.values), g);

  ComplexField predictor = s.u;
  return picard(
      g, system_, conv_, cfg_, shift, f_old, std::move(predictor), t_new,
      [&](const ComplexField& v) -> Eigen::VectorXcd { return v.values + lift_new.values; },
      [&](const Eigen::VectorXd& v_half) -> Eigen::VectorXcd {
        return base - 0.5 * v_half.cast<Complex>().cwiseProduct(v_old + lifts);
      });
}

}  // namespace hartree
