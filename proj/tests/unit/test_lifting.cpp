#include "support.hpp"

#include "hartree/lifting.hpp"

using namespace hartree;
using namespace hartree::test;

namespace {

BoundaryData forcing(double amplitude, BoundaryProfile p = BoundaryProfile::Uniform) {
  BoundaryData bd;
  bd.amplitude = amplitude;
  bd.t0 = 0.0;
  bd.t1 = 1.0;
  bd.omega = 3.0;
  bd.profile = p;
  bd.center = Point(0.5, 0.0, 0.0);
  bd.sigma = 0.3;
  return bd;
}

BoundaryTrace random_trace(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  BoundaryTrace t{g.id, Eigen::VectorXcd(g.boundary_size())};
  for (auto& z : t.values) z = Complex(nd(rng), nd(rng));
  return t;
}

}  // namespace

TEST_CASE("time window: support, peak and smoothness") {
  CHECK(smooth_window(-0.1, 0.0, 1.0) == 0.0);
  CHECK(smooth_window(0.0, 0.0, 1.0) == 0.0);
  CHECK(smooth_window(1.0, 0.0, 1.0) == 0.0);
  CHECK(smooth_window(1.3, 0.0, 1.0) == 0.0);
  CHECK(smooth_window(0.5, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(smooth_window(0.2, 0.0, 1.0) == doctest::Approx(smooth_window(0.8, 0.0, 1.0)));
  // derivative against centred differences
  for (double t : {0.05, 0.2, 0.45, 0.5, 0.7, 0.93}) {
    const double d = 1e-6;
    const double fd = (smooth_window(t + d, 0.0, 1.0) - smooth_window(t - d, 0.0, 1.0)) / (2 * d);
    CHECK(smooth_window_derivative(t, 0.0, 1.0) == doctest::Approx(fd).epsilon(1e-6));
  }
  // three vanishing derivatives at the ends: w(t0 + s) = O(s^4)
  const double r = smooth_window(1e-3, 0.0, 1.0) / smooth_window(2e-3, 0.0, 1.0);
  CHECK(r == doctest::Approx(1.0 / 16.0).epsilon(1e-2));
}

TEST_CASE("boundary data: analytic time derivative") {
  const Grid g = square(9);
  const BoundaryData bd = forcing(0.7, BoundaryProfile::Gaussian);
  for (double t : {0.1, 0.37, 0.8}) {
    const double d = 1e-6;
    const auto plus = bd.trace(g, t + d).values, minus = bd.trace(g, t - d).values;
    const auto qt = bd.trace_t(g, t).values;
    CHECK(max_abs((plus - minus) / (2 * d) - qt) <= 1e-6 * (1.0 + max_abs(qt)));
  }
}

TEST_CASE("boundary data: tangential trace") {
  const Grid g1 = line(9);
  CHECK(max_abs(forcing(1.0).tangential_trace(g1, 0.5).values) == 0.0);
  const Grid g = square(17);
  const BoundaryData bd = forcing(1.0, BoundaryProfile::Gaussian);
  const auto tt = bd.tangential_trace(g, 0.5).values;
  const Complex time_factor = bd.amplitude * smooth_window(0.5, 0.0, 1.0) * std::polar(1.0, bd.omega * 0.5);
  for (Index b = 0; b < g.boundary_size(); ++b) {
    if (g.corner[b]) {
      CHECK(tt[b] == Complex(0.0));
      continue;
    }
    const Point x = g.point(g.boundary_idx[b]);
    const Point tangent(-g.outward_normal(b, 1), g.outward_normal(b, 0), 0.0);
    const double s2 = bd.sigma * bd.sigma;
    const Point dx = x - bd.center;
    const double gx = std::exp(-(dx[0] * dx[0] + dx[1] * dx[1]) / (2 * s2));
    const double dg = -(dx[0] * tangent[0] + dx[1] * tangent[1]) / s2 * gx;
    CHECK(std::abs(tt[b] - time_factor * dg) <= 1e-12);
  }
}

TEST_CASE("harmonic lift: constants and 1D affine data are exact") {
  const Grid g = square(9);
  const HarmonicLifter lift(g);
  const BoundaryTrace c{g.id, Eigen::VectorXcd::Constant(g.boundary_size(), Complex(2.0, -1.0))};
  CHECK(max_abs(lift.extend(c).values.array() - Complex(2.0, -1.0)) <= 1e-13);

  const Grid l = line(11);
  BoundaryTrace ab{l.id, Eigen::VectorXcd(2)};
  ab.values << Complex(1.0, 2.0), Complex(-3.0, 0.5);
  const ComplexField q = HarmonicLifter(l).extend(ab);
  for (Index p = 0; p < l.size(); ++p) {
    const double x = l.point(p)[0];
    CHECK(std::abs(q.values[p] - (ab.values[0] + (ab.values[1] - ab.values[0]) * x)) <= 1e-13);
  }
}

TEST_CASE("harmonic lift: maximum principle, linearity, boundary exactness") {
  const Grid g = build_grid(2, {{0.0, 1.0}, {0.0, 2.0}}, {12, 19});
  const HarmonicLifter lift(g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BoundaryTrace q1 = random_trace(g, seed), q2 = random_trace(g, seed + 50);
    const ComplexField e1 = lift.extend(q1), e2 = lift.extend(q2);
    for (Index p : g.interior_idx) {
      CHECK(e1.values[p].real() <= q1.values.real().maxCoeff() + 1e-12);
      CHECK(e1.values[p].real() >= q1.values.real().minCoeff() - 1e-12);
      CHECK(e1.values[p].imag() <= q1.values.imag().maxCoeff() + 1e-12);
      CHECK(e1.values[p].imag() >= q1.values.imag().minCoeff() - 1e-12);
    }
    for (Index b = 0; b < g.boundary_size(); ++b) CHECK(e1.values[g.boundary_idx[b]] == q1.values[b]);
    const Complex alpha(0.3, -1.2), beta(2.0, 0.5);
    const BoundaryTrace mix{g.id, alpha * q1.values + beta * q2.values};
    CHECK(max_abs(lift.extend(mix).values - (alpha * e1.values + beta * e2.values)) <= 1e-12);
  }
}

TEST_CASE("harmonic lift: time derivative is consistent at second order") {
  const Grid g = square(13);
  const HarmonicLifter lifter(g);
  const BoundaryData bd = forcing(1.0, BoundaryProfile::Gaussian);
  const double t = 0.3;
  const auto qt = harmonic_lift(bd, t, lifter).qtilde_t.values;
  double prev = 0.0;
  for (int level = 0; level < 4; ++level) {
    const double d = 0.02 / std::pow(2.0, level);
    const auto fd = ((harmonic_lift(bd, t + d, lifter).qtilde.values - harmonic_lift(bd, t - d, lifter).qtilde.values) /
                     (2 * d))
                        .eval();
    const double err = max_abs(fd - qt);
    if (level > 0) CHECK(order(prev, err) == doctest::Approx(2.0).epsilon(0.15));
    prev = err;
  }
}

TEST_CASE("compatibility of initial data") {
  const Grid g = line(33);
  CHECK(validate_compatibility(zeros<Complex>(g), forcing(0.0), g).pass);
  CHECK(validate_compatibility(zeros<Complex>(g), forcing(0.0), g).max_mismatch == 0.0);

  BoundaryData on = forcing(1.0);
  on.omega = 0.0;
  on.t0 = -1.0;
  on.t1 = 1.0;  // window peaks at t = 0, q(., 0) = 1
  const auto bad = validate_compatibility(zeros<Complex>(g), on, g);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_mismatch == doctest::Approx(1.0));

  const Grid s = square(17);
  ComplexField phi = harmonic_lift(on, 0.0, s).qtilde;
  for (Index p : s.interior_idx) {
    const Point x = s.point(p);
    phi.values[p] += std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  }
  CHECK(validate_compatibility(phi, on, s).max_mismatch <= 1e-12);
}

TEST_CASE("homogenized source: zero data and reduction to the nonlinearity") {
  const Grid g = line(40);
  KernelSpec k;
  const Lift none{zeros<Complex>(g), zeros<Complex>(g)};
  CHECK(max_abs(homogenized_source(zeros<Complex>(g), none, g, k).values) == 0.0);

  ComplexField v = smooth_field(g, 4);
  for (Index b : g.boundary_idx) v.values[b] = 0.0;
  const auto src = homogenized_source(v, none, g, k).values;
  const auto fv = apply_nonlinearity(v, g, k).values;
  for (Index p : g.interior_idx) CHECK(std::abs(src[p] + fv[p]) <= 1e-14 * (1.0 + std::abs(fv[p])));

  ComplexField leaky = v;
  leaky.values[0] = 1.0;
  CHECK_THROWS_AS(homogenized_source(leaky, none, g, k), PreconditionError);
}
