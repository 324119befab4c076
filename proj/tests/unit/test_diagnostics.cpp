#include "support.hpp"

#include "hartree/calculus.hpp"
#include "hartree/diagnostics.hpp"
#include "hartree/stepper.hpp"

using namespace hartree;
using namespace hartree::test;

namespace {

ComplexField bump(const Grid& g, double k0 = 0.0) {
  ComplexField u = sample<Complex>(g, [&](const Point& p) {
    return std::exp(-(p[0] - 0.5) * (p[0] - 0.5) / (2 * 0.01)) * std::polar(1.0, k0 * p[0]);
  });
  for (Index b : g.boundary_idx) u.values[b] = 0.0;
  return u;
}

std::vector<Observables> run(const Grid& g, const BoundaryData& bd, ComplexField u0, int steps, double dt,
                             std::vector<ComplexField>* states = nullptr) {
  const KernelSpec k;
  StepperConfig cfg;
  cfg.dt = dt;
  const CrankNicolsonStepper stepper(g, k, bd, cfg);
  const XiField xi = build_xi_field(g);
  SolverState s{0.0, std::move(u0)};
  std::vector<Observables> out{observe(s.u, 0.0, bd, g, stepper.convolver(), xi)};
  if (states) states->push_back(s.u);
  for (int n = 1; n <= steps; ++n) {
    s = stepper.step(s);
    s.t = n * dt;
    out.push_back(observe(s.u, s.t, bd, g, stepper.convolver(), xi));
    if (states) states->push_back(s.u);
  }
  return out;
}

BoundaryData forcing() {
  BoundaryData bd;
  bd.amplitude = 0.5;
  bd.t0 = 0.0;
  bd.t1 = 0.1;
  bd.omega = 4.0;
  bd.profile = BoundaryProfile::Left;
  return bd;
}

}  // namespace

TEST_CASE("mass and energy of the zero field") {
  const Grid g = line(32);
  CHECK(mass(zeros<Complex>(g), g) == 0.0);
  CHECK(energy(zeros<Complex>(g), g, KernelSpec{}) == 0.0);
}

TEST_CASE("energy homogeneity: gradient part c^2, Hartree part c^4") {
  const Grid g = square(17);
  const ComplexField u = smooth_field(g, 3);
  const double grad = 0.5 * gradient_energy(gradient(u, g), g);
  const double hartree = energy(u, g, KernelSpec{}) - grad;
  const double e2 = energy(ComplexField{g.id, 2.0 * u.values}, g, KernelSpec{});
  CHECK(std::abs(e2 - (4.0 * grad + 16.0 * hartree)) <= 1e-12 * e2);
}

TEST_CASE("energy of the constant field is the quarter double sum") {
  const Grid g = line(40);
  const double a = 0.1;
  KernelSpec k;
  k.soften_a = a;
  double expect = 0.0;
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = 0; j < g.size(); ++j) {
      const double r = g.point(i)[0] - g.point(j)[0];
      expect += g.quad_w[i] * g.quad_w[j] / std::sqrt(r * r + a * a);
    }
  const RealField one = sample<double>(g, [](const Point&) { return 1.0; });
  CHECK(energy(ComplexField{g.id, one.values.cast<Complex>()}, g, k) == doctest::Approx(0.25 * expect).epsilon(1e-12));
}

TEST_CASE("energy is nonnegative") {
  const Grid g = square(12);
  KernelSpec coul;
  coul.family = KernelFamily::Coulomb;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    CHECK(energy(random_field(g, s), g, KernelSpec{}) >= 0.0);
    CHECK(energy(random_field(g, s), g, coul) >= 0.0);
  }
}

TEST_CASE("stencil derivatives are exact on quadratics") {
  const double h = 0.1, t0 = 1.0;
  const auto q = [](double t) { return 3.0 * t * t - t + 2.0; };
  const std::array<double, 3> v{q(t0), q(t0 + h), q(t0 + 2 * h)};
  CHECK(stencil_derivative(v, h, Stencil::Forward) == doctest::Approx(6.0 * t0 - 1.0));
  CHECK(stencil_derivative(v, h, Stencil::Centered) == doctest::Approx(6.0 * (t0 + h) - 1.0));
  CHECK(stencil_derivative(v, h, Stencil::Backward) == doctest::Approx(6.0 * (t0 + 2 * h) - 1.0));
}

TEST_CASE("identities vanish on the zero field") {
  const Grid g = line(32);
  const StateWindow w{{0.0, 1e-3, 2e-3}, {zeros<Complex>(g), zeros<Complex>(g), zeros<Complex>(g)}};
  const auto m = mass_identity_residual(w, BoundaryData{}, g);
  const auto e = energy_identity_residual(w, BoundaryData{}, g, KernelSpec{});
  const auto v = virial_identity_residual(w, BoundaryData{}, g, KernelSpec{}, build_xi_field(g));
  CHECK(m.lhs == 0.0);
  CHECK(m.rhs == 0.0);
  CHECK(e.lhs == 0.0);
  CHECK(e.rhs == 0.0);
  CHECK(v.lhs == Complex(0.0));
  for (const Complex& t : v.terms) CHECK(t == Complex(0.0));
}

TEST_CASE("homogeneous data: mass identity sides") {
  const Grid g = line(128);
  std::vector<ComplexField> states;
  const double dt = 1e-3;
  run(g, BoundaryData{}, bump(g, 10.0), 4, dt, &states);
  for (int k = 0; k + 2 < 5; ++k) {
    const StateWindow w{{k * dt, (k + 1) * dt, (k + 2) * dt}, {states[k], states[k + 1], states[k + 2]}};
    const auto r = mass_identity_residual(w, BoundaryData{}, g);
    CHECK(r.rhs == 0.0);
    CHECK(std::abs(r.lhs) <= 10.0 * 1e-10 / dt);
    CHECK(energy_identity_residual(w, BoundaryData{}, g, KernelSpec{}).rhs == 0.0);
  }
}

TEST_CASE("window evaluators agree with the observables path") {
  const Grid g = line(64);
  std::vector<ComplexField> states;
  const double dt = 1e-3;
  const BoundaryData bd = forcing();
  const auto hist = run(g, bd, bump(g), 6, dt, &states);
  const StateWindow w{{2 * dt, 3 * dt, 4 * dt}, {states[2], states[3], states[4]}};
  const auto direct = virial_identity_residual(w, bd, g, KernelSpec{}, build_xi_field(g));
  const auto via = window_residuals({&hist[2], &hist[3], &hist[4]}, Stencil::Centered);
  CHECK(std::abs(direct.res - via.virial.res) <= 1e-12 * (1.0 + std::abs(direct.rhs)));
  CHECK(mass_identity_residual(w, bd, g).res == doctest::Approx(via.mass.res));
  CHECK(energy_identity_residual(w, bd, g, KernelSpec{}).res == doctest::Approx(via.energy.res));
}

TEST_CASE("1D virial strain term and vanishing grad eta term") {
  const Grid g = line(64);
  const ComplexField u = smooth_field(g, 8);
  const Convolver conv(g, KernelSpec{});
  const Observables o = observe(u, 0.0, BoundaryData{}, g, conv, build_xi_field(g));
  const double grad_sq = gradient_energy(gradient(u, g), g);
  // xi' = 2 on [0, 1]
  CHECK(o.virial_terms[0].real() == 0.0);
  CHECK(o.virial_terms[0].imag() == doctest::Approx(2.0 * 2.0 * grad_sq).epsilon(1e-12));
  CHECK(o.virial_terms[1] == Complex(0.0));
}

TEST_CASE("virial terms depend only on the state at one time") {
  const Grid g = line(64);
  const BoundaryData bd = forcing();
  const Convolver conv(g, KernelSpec{});
  const XiField xi = build_xi_field(g);
  const ComplexField u = bump(g, 3.0);
  const auto a = observe(u, 0.03, bd, g, conv, xi).virial_terms;
  const auto b = observe(u, 0.03, bd, g, conv, xi).virial_terms;
  for (std::size_t i = 0; i < kVirialTerms; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("J: zero run and monotonicity") {
  const Grid g = line(64);
  const auto zero = run(g, BoundaryData{}, zeros<Complex>(g), 10, 1e-3);
  for (double j : boundary_flux_J(zero)) CHECK(j == 0.0);
  const auto forced = boundary_flux_J(run(g, forcing(), bump(g), 80, 1e-3));
  for (std::size_t k = 1; k < forced.size(); ++k) CHECK(forced[k] >= forced[k - 1]);
  CHECK(forced.back() > 0.0);
}

TEST_CASE("a priori inequality: zero run passes, calibration run passes") {
  const Grid g = line(64);
  const auto zero = run(g, BoundaryData{}, zeros<Complex>(g), 10, 1e-3);
  const auto rep0 = apriori_inequality_check(zero, calibrate_apriori(zero));
  CHECK(rep0.pass);
  for (double l : rep0.lhs) CHECK(l == 0.0);
  for (double r : rep0.rhs) CHECK(r >= 0.0);

  const auto hist = run(g, forcing(), bump(g), 100, 1e-3);
  const AprioriConstants c = calibrate_apriori(hist, 1.1);
  const auto rep = apriori_inequality_check(hist, c);
  CHECK(rep.pass);
  CHECK(rep.gronwall_pass);
}

TEST_CASE("window spacing must be uniform") {
  const Grid g = line(16);
  const StateWindow w{{0.0, 1e-3, 3e-3}, {zeros<Complex>(g), zeros<Complex>(g), zeros<Complex>(g)}};
  CHECK_THROWS_AS(mass_identity_residual(w, BoundaryData{}, g), PreconditionError);
}
