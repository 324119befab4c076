#include "support.hpp"

#include "hartree/kernel.hpp"

using namespace hartree;
using namespace hartree::test;

namespace {

KernelSpec softened(double a = 0.1, KernelBackend b = KernelBackend::Fast) {
  KernelSpec k;
  k.family = KernelFamily::Softened;
  k.soften_a = a;
  k.backend = b;
  return k;
}

KernelSpec coulomb(KernelBackend b = KernelBackend::Fast) {
  KernelSpec k;
  k.family = KernelFamily::Coulomb;
  k.backend = b;
  return k;
}

// Brute force over the whole grid straight from the kernel formula.
Eigen::VectorXd oracle_potential(const ComplexField& u, const Grid& g, double a) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(g.size());
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = 0; j < g.size(); ++j) {
      const double r2 = (g.point(i) - g.point(j)).squaredNorm();
      f[i] += g.quad_w[j] * std::norm(u.values[j]) / std::sqrt(r2 + a * a);
    }
  return f;
}

double relative(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

TEST_CASE("kernel spec validation") {
  CHECK_NOTHROW(validate(softened(), 1));
  CHECK_NOTHROW(validate(coulomb(), 2));
  try {
    validate(coulomb(), 1);
    FAIL("coulomb accepted in 1D");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("coulomb requires dim=2") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(softened(0.0), 1), ConfigError);
  CHECK_THROWS_AS(validate(softened(-1.0), 2), ConfigError);
}

TEST_CASE("coulomb cell integral against polar quadrature") {
  // integral of 1/r over the rectangle, by exact radial integration in each of
  // the eight triangles: int_0^theta_max (edge / cos phi) dphi with the
  // perpendicular distance `edge` to the far side
  const auto polar = [](double hx, double hy) {
    const auto wedge = [](double edge, double theta) {
      const int m = 20000;
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double phi = (i + 0.5) * theta / m;
        s += edge / std::cos(phi);
      }
      return s * theta / m;
    };
    const double a = hx / 2, b = hy / 2;
    return 4.0 * (wedge(a, std::atan(b / a)) + wedge(b, std::atan(a / b)));
  };
  for (auto [hx, hy] : {std::pair{1.0, 1.0}, {0.1, 0.3}, {2.0, 0.5}})
    CHECK(coulomb_cell_integral(hx, hy) == doctest::Approx(polar(hx, hy)).epsilon(1e-8));
}

TEST_CASE("hartree potential: zero field and single node density") {
  const Grid g = line(16);
  CHECK(hartree_potential(zeros<Complex>(g), g, softened()).values.cwiseAbs().maxCoeff() == 0.0);

  const double a = 0.1;
  const Index y0 = 5;
  ComplexField u = zeros<Complex>(g);
  u.values[y0] = 1.0;
  for (auto backend : {KernelBackend::Direct, KernelBackend::Fast}) {
    const auto f = hartree_potential(u, g, softened(a, backend)).values;
    for (Index x = 0; x < g.size(); ++x) {
      const double r = g.point(x)[0] - g.point(y0)[0];
      CHECK(f[x] == doctest::Approx(g.quad_w[y0] / std::sqrt(r * r + a * a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fast backend matches the brute force oracle") {
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? line(32) : square(12);
    const ComplexField u = random_field(g, 7);
    const auto expect = oracle_potential(u, g, 0.1);
    CHECK(relative(expect, hartree_potential(u, g, softened(0.1, KernelBackend::Fast)).values) <= 1e-12);
    CHECK(relative(expect, hartree_potential(u, g, softened(0.1, KernelBackend::Direct)).values) <= 1e-12);
  }
}

TEST_CASE("backends agree on every family and size") {
  for (Index n : {4, 17, 64, 256, 512}) {
    const Grid g = line(n);
    const ComplexField u = random_field(g, n);
    const auto d = hartree_potential(u, g, softened(0.1, KernelBackend::Direct)).values;
    CHECK(relative(d, hartree_potential(u, g, softened(0.1, KernelBackend::Fast)).values) <= 1e-12);
  }
  for (Index n : {5, 16, 33, 64}) {
    const Grid g = build_grid(2, {{0.0, 1.0}, {-0.5, 1.5}}, {n, n + 2});
    const ComplexField u = random_field(g, n);
    for (const KernelSpec& k : {softened(0.2), coulomb()}) {
      KernelSpec kd = k;
      kd.backend = KernelBackend::Direct;
      const auto d = hartree_potential(u, g, kd).values;
      CHECK(relative(d, hartree_potential(u, g, k).values) <= 1e-12);
      const auto gd = gradient_kernel_convolution(u, g, kd).values;
      const auto gf = gradient_kernel_convolution(u, g, k).values;
      CHECK((gd - gf).cwiseAbs().maxCoeff() <= 1e-12 * gd.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("potential is nonnegative and the kernel matrix is symmetric") {
  const Grid g = square(9);
  for (const KernelSpec& k : {softened(), coulomb()}) {
    for (std::uint64_t s = 1; s <= 5; ++s) CHECK(hartree_potential(random_field(g, s), g, k).values.minCoeff() >= 0.0);
    for (Index i = 0; i < g.size(); i += 7)
      for (Index j = 0; j < g.size(); j += 5)
        CHECK(kernel_value(k, g, g.point(i) - g.point(j)) == kernel_value(k, g, g.point(j) - g.point(i)));
  }
}

TEST_CASE("apply_nonlinearity: zero, real fields and phase invariance") {
  const Grid g = line(40);
  CHECK(max_abs(apply_nonlinearity(zeros<Complex>(g), g, softened()).values) == 0.0);
  ComplexField r = random_field(g, 3);
  for (auto& z : r.values) z = z.real();
  CHECK(apply_nonlinearity(r, g, softened()).values.imag().cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexField u = random_field(g, 20 + trial);
    const Complex phase = std::polar(1.0, angle(rng));
    const ComplexField rotated{g.id, phase * u.values};
    const auto lhs = apply_nonlinearity(rotated, g, softened()).values;
    const auto rhs = (phase * apply_nonlinearity(u, g, softened()).values).eval();
    CHECK(max_abs(lhs - rhs) <= 1e-14 * max_abs(rhs));
  }
}

TEST_CASE("gradient kernel convolution: single node density") {
  const Grid g = line(20);
  const double a = 0.1;
  const Index y0 = 7;
  ComplexField u = zeros<Complex>(g);
  u.values[y0] = 1.0;
  CHECK(gradient_kernel_convolution(zeros<Complex>(g), g, softened(a)).values.cwiseAbs().maxCoeff() == 0.0);
  const auto gk = gradient_kernel_convolution(u, g, softened(a)).values;
  for (Index x = 0; x < g.size(); ++x) {
    const double r = g.point(x)[0] - g.point(y0)[0];
    const double expect = -g.quad_w[y0] * r / std::pow(r * r + a * a, 1.5);
    CHECK(gk(x, 0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("gradient kernel convolution matches finite differences of f at second order") {
  for (int dim : {1, 2}) {
    double prev = 0.0;
    Index n = dim == 1 ? 33 : 17;
    for (int level = 0; level < 3; ++level, n = refine(n)) {
      const Grid g = dim == 1 ? line(n) : square(n);
      const ComplexField u = sample<Complex>(g, [](const Point& p) {
        return Complex(std::exp(-20.0 * ((p[0] - 0.4) * (p[0] - 0.4) + (p[1] - 0.5) * (p[1] - 0.5))),
                       0.3 * std::cos(2.0 * p[0]));
      });
      const KernelSpec k = softened(0.2);
      const RealField f{g.id, hartree_potential(u, g, k).values};
      const auto fd = gradient(f, g).values;
      const auto gk = gradient_kernel_convolution(u, g, k).values;
      double err = 0.0;
      for (Index p : g.interior_idx)
        for (int d = 0; d < dim; ++d) err = std::max(err, std::abs(fd(p, d) - gk(p, d)));
      if (level > 0) CHECK(order(prev, err) == doctest::Approx(2.0).epsilon(0.15));
      prev = err;
    }
  }
}

TEST_CASE("lipschitz probe: identity and reduction cases") {
  const Grid g = line(64);
  const ComplexField v = smooth_field(g, 5);
  const auto same = lipschitz_probe(v, v, g, softened());
  CHECK(same.numerator == 0.0);
  CHECK(same.ratio == 0.0);
  const auto red = lipschitz_probe(v, zeros<Complex>(g), g, softened());
  CHECK(red.numerator == doctest::Approx(norm(apply_nonlinearity(v, g, softened()), g, NormKind::H1)).epsilon(1e-14));
  CHECK(red.bound_factor == doctest::Approx(std::pow(norm(v, g, NormKind::H1), 3)).epsilon(1e-14));
}

TEST_CASE("hardy quotient: conventions, scaling and preconditions") {
  const Grid g = build_probe_box(3, 1.0, 13);
  CHECK(hardy_quotient(zeros<Complex>(g), g, 3) == 0.0);
  ComplexField u = sample<Complex>(g, [&](const Point& p) {
    double s = 1.0;
    for (int d = 0; d < 3; ++d) s *= std::sin(M_PI * (p[d] - g.lo[d]) / (g.hi[d] - g.lo[d]));
    return Complex(s * (1.0 + p[0]), s * p[1]);
  });
  for (Index b : g.boundary_idx) u.values[b] = 0.0;
  const double q = hardy_quotient(u, g, 3);
  CHECK(q > 0.0);
  const ComplexField scaled{g.id, Complex(-3.5, 2.0) * u.values};
  CHECK(std::abs(hardy_quotient(scaled, g, 3) - q) <= 1e-14 * q);
  CHECK_THROWS_AS(hardy_quotient(u, g, 2), PreconditionError);
  ComplexField leaky = u;
  leaky.values[g.boundary_idx[3]] = 1.0;
  CHECK_THROWS_AS(hardy_quotient(leaky, g, 3), PreconditionError);
}

TEST_CASE("linfty bound check: zero field and quadratic homogeneity") {
  const Grid g = line(64);
  const auto zero = potential_linfty_bound_check(zeros<Complex>(g), g, softened());
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const ComplexField u = smooth_field(g, 9);
  const auto b1 = potential_linfty_bound_check(u, g, softened());
  const auto b2 = potential_linfty_bound_check(ComplexField{g.id, 3.0 * u.values}, g, softened());
  CHECK(b2.lhs == doctest::Approx(9.0 * b1.lhs).epsilon(1e-12));
  CHECK(b2.rhs == doctest::Approx(9.0 * b1.rhs).epsilon(1e-12));
}
