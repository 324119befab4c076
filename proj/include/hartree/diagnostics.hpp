#pragma once

#include <array>
#include <string>
#include <vector>

#include "hartree/boundary_data.hpp"
#include "hartree/kernel.hpp"
#include "hartree/xi_field.hpp"

namespace hartree {

double mass(const ComplexField& u, const Grid& g);
double energy(const ComplexField& u, const Grid& g, const KernelSpec& k);
double energy(const ComplexField& u, const Grid& g, const Convolver& conv);

inline constexpr std::size_t kVirialTerms = 8;
/// Right-hand side terms of the virial identity, in order.
inline const std::array<std::string, kVirialTerms> kVirialTermNames{
    "strain", "grad_eta", "kernel_gradient", "boundary_hartree",
    "boundary_grad_sq", "normal_flux_sq", "boundary_q_qt", "boundary_eta_pn_q"};

/// Everything the identities and the a priori inequality need from one state.
/// Each entry depends on u(t) and the boundary data at t only.
struct Observables {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_sq = 0.0;  ///< ||grad u||^2
  double h1_norm = 0.0;
  Complex virial_functional{};  ///< sum w u (xi . grad conj(u))
  double mass_flux = 0.0;       ///< 2 Im B(conj(Q) P.n)
  double energy_flux = 0.0;     ///< Re B(P.n conj(Q_t))
  std::array<Complex, kVirialTerms> virial_terms{};
  double normal_flux_sq = 0.0;  ///< B(|P.n|^2)
  double tangential_sq = 0.0;   ///< B(|A . grad Q|^2)
  double q_qt_sq = 0.0;         ///< B(|Q conj(Q_t)|^2)
  double pn_q_abs = 0.0;        ///< B(|conj(P.n) Q|)
  double grad_u_abs_u = 0.0;    ///< sum w |grad u| |u|
};

Observables observe(const ComplexField& u, double t, const BoundaryData& bd, const Grid& g, const Convolver& conv,
                    const XiField& xi);

/// Three states at uniformly spaced times t[0] < t[1] < t[2].
struct StateWindow {
  std::array<double, 3> t{};
  std::array<ComplexField, 3> u;
};

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double res = 0.0;
};

struct VirialResidual {
  Complex lhs{};
  std::array<Complex, kVirialTerms> terms{};
  Complex rhs{};
  Complex res{};
};

/// Time derivative placement for a window of three stored states.
enum class Stencil { Centered, Forward, Backward };

/// Evaluates d/dt of a quantity from three uniformly spaced samples at the
/// point selected by the stencil (middle, first or last sample).
double stencil_derivative(const std::array<double, 3>& values, double spacing, Stencil s);
Complex stencil_derivative(const std::array<Complex, 3>& values, double spacing, Stencil s);

struct WindowResiduals {
  IdentityResidual mass;
  IdentityResidual energy;
  VirialResidual virial;
};

/// Residuals of all three identities from observables at three uniformly
/// spaced times; the right sides are taken at the stencil's evaluation point.
WindowResiduals window_residuals(const std::array<const Observables*, 3>& obs, Stencil s);

IdentityResidual mass_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g);
IdentityResidual energy_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g,
                                          const KernelSpec& k);
VirialResidual virial_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g,
                                        const KernelSpec& k, const XiField& xi);

/// J(t_k) = sqrt of the trapezoid rule for the time integral of B(|P.n|^2).
std::vector<double> boundary_flux_J(const std::vector<Observables>& history);

/// Constants of the a priori inequality, fitted once on a calibration run.
struct AprioriConstants {
  double C = 0.0;          ///< multiplies every solution-dependent history term
  double gronwall = 0.0;   ///< envelope J^2 <= c (1 + J + int J^2)
  double margin_factor = 1.1;
};

struct AprioriReport {
  std::vector<double> t, lhs, rhs, margin;
  std::vector<double> gronwall_rhs;
  bool pass = true;
  bool gronwall_pass = true;
  double worst_margin = 0.0;
  double worst_gronwall_margin = 0.0;
};

/// Fits C and the Gronwall constant as `margin_factor` times the smallest
/// values that make both bounds hold at every sampled time of `history`.
AprioriConstants calibrate_apriori(const std::vector<Observables>& history, double margin_factor = 1.1);

/// lhs(t) = J(t)^2 against |V(t)| + |V(0)| + C * (int ||grad u||^2 + int ||u||_H1^2
/// + int int |grad u||u| + int ||u||_H1^4 + int B|conj(P.n) Q|) + int B|A.grad Q|^2
/// + int B|Q conj(Q_t)|^2, with V the virial functional.
AprioriReport apriori_inequality_check(const std::vector<Observables>& history, const AprioriConstants& c);

}  // namespace hartree
