#include "hartree/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hartree/calculus.hpp"

namespace hartree {

double mass(const ComplexField& u, const Grid& g) {
  require_same_grid(u, g, "mass");
  return g.quad_w.dot(u.values.cwiseAbs2());
}

double energy(const ComplexField& u, const Grid& g, const Convolver& conv) {
  const double kinetic = gradient_energy(gradient(u, g), g);
  const Eigen::VectorXd rho = u.values.cwiseAbs2();
  const auto f = hartree_potential(u, g, conv);
  return 0.5 * kinetic + 0.25 * g.quad_w.dot(f.values.cwiseProduct(rho));
}

double energy(const ComplexField& u, const Grid& g, const KernelSpec& k) {
  return energy(u, g, Convolver(g, k));
}

Observables observe(const ComplexField& u, double t, const BoundaryData& bd, const Grid& g, const Convolver& conv,
                    const XiField& xi) {
  require_same_grid(u, g, "observe");
  if (xi.grid_id != g.id) throw GridMismatch("observe: xi field built for another grid");
  const Complex i(0.0, 1.0);
  Observables o;
  o.t = t;

  const auto grad = gradient(u, g);
  const Eigen::VectorXd rho = u.values.cwiseAbs2();
  const Eigen::VectorXd f = conv.potential(rho);
  const Eigen::MatrixXd grad_f = conv.potential_gradient(rho);

  o.mass = g.quad_w.dot(rho);
  o.grad_sq = gradient_energy(grad, g);
  o.energy = 0.5 * o.grad_sq + 0.25 * g.quad_w.dot(f.cwiseProduct(rho));
  o.h1_norm = std::sqrt(o.mass + o.grad_sq);

  Complex strain(0.0), grad_eta(0.0), kernel_term(0.0), virial(0.0);
  double grad_abs = 0.0;
  for (Index p = 0; p < g.size(); ++p) {
    const double w = g.quad_w[p];
    Complex xi_grad_conj(0.0), eta_grad_conj(0.0);
    double kernel_xi = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const Complex d = grad.values(p, a);
      xi_grad_conj += xi.xi(p, a) * std::conj(d);
      eta_grad_conj += xi.grad_eta(p, a) * std::conj(d);
      kernel_xi += grad_f(p, a) * xi.xi(p, a);
      strain += w * xi.axis_slope[a] * std::norm(d);
    }
    virial += w * u.values[p] * xi_grad_conj;
    grad_eta += w * eta_grad_conj * u.values[p];
    kernel_term += w * kernel_xi * rho[p];
    grad_abs += w * std::sqrt(grad.values.row(p).cwiseAbs2().sum()) * std::abs(u.values[p]);
  }
  o.virial_functional = virial;
  o.grad_u_abs_u = grad_abs;

  const BoundaryTrace pn = normal_trace(u, g);
  const BoundaryTrace q = bd.trace(g, t);
  const BoundaryTrace qt = bd.trace_t(g, t);
  const BoundaryTrace tang = bd.tangential_trace(g, t);
  Complex mass_b(0.0), energy_b(0.0), hartree_b(0.0), qqt_b(0.0), eta_b(0.0);
  double flux_sq = 0.0, tang_sq = 0.0, qqt_sq = 0.0, pnq = 0.0;
  for (Index b = 0; b < g.boundary_size(); ++b) {
    const double w = g.boundary_quad_w[b];
    if (w == 0.0) continue;
    const Index p = g.boundary_idx[b];
    const Complex P = pn.values[b];
    const Complex Q = q.values[b];
    const Complex Qt = qt.values[b];
    mass_b += w * std::conj(Q) * P;
    energy_b += w * P * std::conj(Qt);
    hartree_b += w * f[p] * std::norm(Q);
    qqt_b += w * Q * std::conj(Qt);
    eta_b += w * std::conj(P) * xi.eta[p] * Q;
    flux_sq += w * std::norm(P);
    tang_sq += w * std::norm(tang.values[b]);
    qqt_sq += w * std::norm(Q * std::conj(Qt));
    pnq += w * std::abs(std::conj(P) * Q);
  }
  o.mass_flux = 2.0 * mass_b.imag();
  o.energy_flux = energy_b.real();
  o.normal_flux_sq = flux_sq;
  o.tangential_sq = tang_sq;
  o.q_qt_sq = qqt_sq;
  o.pn_q_abs = pnq;

  o.virial_terms[0] = 2.0 * i * strain;
  o.virial_terms[1] = i * grad_eta;
  // grad f = (grad k) * |u|^2; for the Coulomb kernel -grad f = (x/|x|^3) * |u|^2
  o.virial_terms[2] = -i * kernel_term;
  o.virial_terms[3] = i * hartree_b;
  o.virial_terms[4] = i * (flux_sq + tang_sq);
  o.virial_terms[5] = -2.0 * i * flux_sq;
  o.virial_terms[6] = qqt_b;
  o.virial_terms[7] = -i * eta_b;
  return o;
}

double stencil_derivative(const std::array<double, 3>& v, double spacing, Stencil s) {
  switch (s) {
    case Stencil::Centered: return (v[2] - v[0]) / (2.0 * spacing);
    case Stencil::Forward: return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * spacing);
    case Stencil::Backward: return (3.0 * v[2] - 4.0 * v[1] + v[0]) / (2.0 * spacing);
  }
  return 0.0;
}

Complex stencil_derivative(const std::array<Complex, 3>& v, double spacing, Stencil s) {
  return {stencil_derivative(std::array<double, 3>{v[0].real(), v[1].real(), v[2].real()}, spacing, s),
          stencil_derivative(std::array<double, 3>{v[0].imag(), v[1].imag(), v[2].imag()}, spacing, s)};
}

namespace {

double window_spacing(const std::array<double, 3>& t) {
  const double d0 = t[1] - t[0];
  const double d1 = t[2] - t[1];
  if (!(d0 > 0.0) || std::abs(d1 - d0) > 1e-8 * d0)
    throw PreconditionError("identity residual: states must be uniformly spaced in time");
  return 0.5 * (d0 + d1);
}

}  // namespace

WindowResiduals window_residuals(const std::array<const Observables*, 3>& obs, Stencil s) {
  const std::array<double, 3> t{obs[0]->t, obs[1]->t, obs[2]->t};
  const double dt = window_spacing(t);
  const Observables& at = s == Stencil::Centered ? *obs[1] : (s == Stencil::Forward ? *obs[0] : *obs[2]);

  WindowResiduals r;
  r.mass.lhs = stencil_derivative(std::array<double, 3>{obs[0]->mass, obs[1]->mass, obs[2]->mass}, dt, s);
  r.mass.rhs = at.mass_flux;
  r.mass.res = r.mass.lhs - r.mass.rhs;

  r.energy.lhs = stencil_derivative(std::array<double, 3>{obs[0]->energy, obs[1]->energy, obs[2]->energy}, dt, s);
  r.energy.rhs = at.energy_flux;
  r.energy.res = r.energy.lhs - r.energy.rhs;

  r.virial.lhs = stencil_derivative(
      std::array<Complex, 3>{obs[0]->virial_functional, obs[1]->virial_functional, obs[2]->virial_functional}, dt, s);
  r.virial.terms = at.virial_terms;
  r.virial.rhs = Complex(0.0);
  for (const Complex& term : r.virial.terms) r.virial.rhs += term;
  r.virial.res = r.virial.lhs - r.virial.rhs;
  return r;
}

namespace {

std::array<Observables, 3> observe_window(const StateWindow& w, const BoundaryData& bd, const Grid& g,
                                          const Convolver& conv, const XiField& xi) {
  return {observe(w.u[0], w.t[0], bd, g, conv, xi), observe(w.u[1], w.t[1], bd, g, conv, xi),
          observe(w.u[2], w.t[2], bd, g, conv, xi)};
}

WindowResiduals residuals_of(const StateWindow& w, const BoundaryData& bd, const Grid& g, const KernelSpec& k,
                             const XiField& xi) {
  window_spacing(w.t);
  const auto obs = observe_window(w, bd, g, Convolver(g, k), xi);
  return window_residuals({&obs[0], &obs[1], &obs[2]}, Stencil::Centered);
}

}  // namespace

IdentityResidual mass_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g) {
  // the mass identity involves no kernel term; a zero-strength kernel avoids the convolution
  KernelSpec none;
  none.strength = 0.0;
  none.backend = KernelBackend::Direct;
  return residuals_of(w, bd, g, none, build_xi_field(g)).mass;
}

IdentityResidual energy_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g,
                                          const KernelSpec& k) {
  return residuals_of(w, bd, g, k, build_xi_field(g)).energy;
}

VirialResidual virial_identity_residual(const StateWindow& w, const BoundaryData& bd, const Grid& g,
                                        const KernelSpec& k, const XiField& xi) {
  return residuals_of(w, bd, g, k, xi).virial;
}

std::vector<double> boundary_flux_J(const std::vector<Observables>& history) {
  std::vector<double> j(history.size(), 0.0);
  double acc = 0.0;
  for (std::size_t m = 1; m < history.size(); ++m) {
    const double dt = history[m].t - history[m - 1].t;
    acc += 0.5 * dt * (history[m - 1].normal_flux_sq + history[m].normal_flux_sq);
    j[m] = std::sqrt(acc);
  }
  return j;
}

namespace {

struct AprioriParts {
  std::vector<double> lhs, fixed, scaled, j, int_j2;
};

AprioriParts apriori_parts(const std::vector<Observables>& h) {
  AprioriParts parts;
  const std::size_t n = h.size();
  parts.j = boundary_flux_J(h);
  parts.lhs.resize(n);
  parts.fixed.resize(n);
  parts.scaled.resize(n);
  parts.int_j2.resize(n);
  double i_grad = 0.0, i_h1sq = 0.0, i_gradu = 0.0, i_h1q = 0.0, i_pnq = 0.0, i_tang = 0.0, i_qqt = 0.0, i_j2 = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    if (m > 0) {
      const Observables& a = h[m - 1];
      const Observables& b = h[m];
      const double half = 0.5 * (b.t - a.t);
      i_grad += half * (a.grad_sq + b.grad_sq);
      i_h1sq += half * (a.h1_norm * a.h1_norm + b.h1_norm * b.h1_norm);
      i_gradu += half * (a.grad_u_abs_u + b.grad_u_abs_u);
      i_h1q += half * (std::pow(a.h1_norm, 4) + std::pow(b.h1_norm, 4));
      i_pnq += half * (a.pn_q_abs + b.pn_q_abs);
      i_tang += half * (a.tangential_sq + b.tangential_sq);
      i_qqt += half * (a.q_qt_sq + b.q_qt_sq);
      i_j2 += half * (parts.j[m - 1] * parts.j[m - 1] + parts.j[m] * parts.j[m]);
    }
    parts.lhs[m] = parts.j[m] * parts.j[m];
    parts.fixed[m] = std::abs(h[m].virial_functional) + std::abs(h.front().virial_functional) + i_tang + i_qqt;
    parts.scaled[m] = i_grad + i_h1sq + i_gradu + i_h1q + i_pnq;
    parts.int_j2[m] = i_j2;
  }
  return parts;
}

}  // namespace

AprioriConstants calibrate_apriori(const std::vector<Observables>& history, double margin_factor) {
  AprioriConstants c;
  c.margin_factor = margin_factor;
  const auto parts = apriori_parts(history);
  double need_c = 0.0;
  double need_g = 0.0;
  for (std::size_t m = 0; m < history.size(); ++m) {
    const double excess = parts.lhs[m] - parts.fixed[m];
    if (excess > 0.0) {
      need_c = parts.scaled[m] > 0.0 ? std::max(need_c, excess / parts.scaled[m])
                                     : std::numeric_limits<double>::infinity();
    }
    need_g = std::max(need_g, parts.lhs[m] / (1.0 + parts.j[m] + parts.int_j2[m]));
  }
  c.C = margin_factor * need_c;
  c.gronwall = margin_factor * need_g;
  return c;
}

AprioriReport apriori_inequality_check(const std::vector<Observables>& history, const AprioriConstants& c) {
  const auto parts = apriori_parts(history);
  AprioriReport rep;
  const std::size_t n = history.size();
  rep.t.resize(n);
  rep.lhs = parts.lhs;
  rep.rhs.resize(n);
  rep.margin.resize(n);
  rep.gronwall_rhs.resize(n);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.worst_gronwall_margin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < n; ++m) {
    rep.t[m] = history[m].t;
    rep.rhs[m] = parts.fixed[m] + c.C * parts.scaled[m];
    rep.margin[m] = rep.rhs[m] - rep.lhs[m];
    rep.gronwall_rhs[m] = c.gronwall * (1.0 + parts.j[m] + parts.int_j2[m]);
    rep.worst_margin = std::min(rep.worst_margin, rep.margin[m]);
    rep.worst_gronwall_margin = std::min(rep.worst_gronwall_margin, rep.gronwall_rhs[m] - rep.lhs[m]);
  }
  if (n == 0) rep.worst_margin = rep.worst_gronwall_margin = 0.0;
  rep.pass = rep.worst_margin >= 0.0;
  rep.gronwall_pass = rep.worst_gronwall_margin >= 0.0;
  return rep;
}

}  // namespace hartree
