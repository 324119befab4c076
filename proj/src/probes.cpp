#include "hartree/probes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "hartree/lifting.hpp"

namespace hartree {

int probe_thread_count() {
  if (const char* env = std::getenv("HARTREE_BVP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Calls fn(i, worker) for i in [0, count). Work is handed out dynamically but
// every result is stored by index, so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, count));
  std::atomic<int> next{0};
  const auto body = [&](int w) {
    for (int i = next++; i < count; i = next++) fn(i, w);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(body, w);
  body(0);
  for (auto& t : pool) t.join();
}

double basis(int m, double s) {
  return m % 2 == 0 ? std::cos(0.5 * m * M_PI * s) : std::sin(0.5 * (m + 1) * M_PI * s);
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Grid probe_grid(const RunConfig& cfg, Index n) {
  RunConfig c = cfg;
  c.grid.nx = n;
  if (c.grid.dim == 2) c.grid.ny = n;
  return make_grid(c);
}

}  // namespace

ComplexField FieldRecipe::sample(const Grid& g) const {
  // every basis function is a product over axes, so tabulate per axis once
  int top = 0;
  for (const auto& m : modes) top = std::max({top, m[0], m[1], m[2]});
  std::array<Eigen::MatrixXd, 3> table;  // (mode, axis index)
  std::array<Eigen::VectorXd, 3> unit, wall;
  for (int d = 0; d < g.dim; ++d) {
    table[d].resize(top + 1, g.n[d]);
    unit[d].resize(g.n[d]);
    wall[d].resize(g.n[d]);
    for (Index i = 0; i < g.n[d]; ++i) {
      Index node = 0;
      if (d == 0) node = g.node(i);
      else if (d == 1) node = g.node(0, i);
      else node = g.node(0, 0, i);
      const double s = (g.point(node)[d] - g.lo[d]) / (g.hi[d] - g.lo[d]);
      unit[d][i] = s;
      wall[d][i] = std::sin(M_PI * s);
      for (int m = 0; m <= top; ++m) table[d](m, i) = basis(m, s);
    }
  }
  ComplexField u = zeros<Complex>(g);
  for (Index p = 0; p < g.size(); ++p) {
    const auto idx = g.multi_index(p);
    Complex v{};
    for (std::size_t m = 0; m < modes.size(); ++m) {
      double b = 1.0;
      for (int d = 0; d < g.dim; ++d) b *= table[d](modes[m][d], idx[d]);
      v += coeffs[m] * b;
    }
    for (std::size_t j = 0; j < bump_centers.size(); ++j) {
      double r2 = 0.0;
      for (int d = 0; d < g.dim; ++d) r2 += (unit[d][idx[d]] - bump_centers[j][d]) * (unit[d][idx[d]] - bump_centers[j][d]);
      v += bump_amps[j] * std::exp(-r2 / (2.0 * bump_widths[j] * bump_widths[j]));
    }
    if (vanishing)
      for (int d = 0; d < g.dim; ++d) v *= wall[d][idx[d]];
    u.values[p] = v;
  }
  if (vanishing)
    for (Index b : g.boundary_idx) u.values[b] = 0.0;
  return u;
}

FieldRecipe random_recipe(std::uint64_t seed, std::uint64_t index, int dim, bool vanishing, bool bumps) {
  auto rng = rng_for(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FieldRecipe r;
  r.vanishing = vanishing;
  const int per_axis = dim == 1 ? 6 : (dim == 2 ? 4 : 3);
  const double scale = std::exp(std::log(0.2) + unit(rng) * std::log(10.0));
  std::array<int, 3> m{0, 0, 0};
  const int total = static_cast<int>(std::pow(per_axis, dim));
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat, order = 0;
    for (int d = 0; d < dim; ++d) {
      m[d] = rest % per_axis;
      rest /= per_axis;
      order += m[d];
    }
    const double decay = scale / ((1.0 + order) * (1.0 + order));
    r.modes.push_back(m);
    r.coeffs.emplace_back(decay * normal(rng), decay * normal(rng));
  }
  if (bumps) {
    const int count = 1 + static_cast<int>(unit(rng) * 2.0);
    for (int j = 0; j < count; ++j) {
      Point c = Point::Zero();
      // centred within 0.15 of the box middle in unit coordinates
      for (int d = 0; d < dim; ++d) c[d] = 0.5 + 0.3 * (unit(rng) - 0.5);
      r.bump_centers.push_back(c);
      r.bump_widths.push_back(0.075 + 0.175 * unit(rng));
      r.bump_amps.emplace_back(3.0 * scale * normal(rng), 3.0 * scale * normal(rng));
    }
  }
  return r;
}

LipschitzProbeReport run_lipschitz_probe(const RunConfig& cfg, Index n, int samples, std::uint64_t seed) {
  const Grid g = probe_grid(cfg, n);
  const Convolver conv(g, cfg.kernel);
  const int workers = probe_thread_count();
  std::vector<Convolver> convs(static_cast<std::size_t>(std::max(1, std::min(workers, samples))), conv);
  std::vector<double> ratio(samples), linfty(samples);
  parallel_for(samples, workers, [&](int i, int w) {
    const std::uint64_t base = 3ull * static_cast<std::uint64_t>(i);
    const ComplexField v = random_recipe(seed, base, g.dim, false, false).sample(g);
    ComplexField w_field = zeros<Complex>(g);
    switch (i % 3) {
      case 0:
        w_field = random_recipe(seed, base + 1, g.dim, false, false).sample(g);
        break;
      case 1: {
        const ComplexField z = random_recipe(seed, base + 2, g.dim, false, false).sample(g);
        w_field.values = v.values + 1e-2 * z.values;
        break;
      }
      default:
        break;  // w = 0
    }
    ratio[i] = lipschitz_probe(v, w_field, g, convs[w]).ratio;
    const LinftyBound b = potential_linfty_bound_check(v, g, convs[w]);
    linfty[i] = b.rhs > 0.0 ? b.lhs / b.rhs : 0.0;
  });
  LipschitzProbeReport r;
  r.n = n;
  r.samples = samples;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    if (!std::isfinite(ratio[i])) r.finite = false;
    sum += ratio[i];
    if (ratio[i] > r.max_ratio) r.max_ratio = ratio[i], r.argmax = i;
    r.max_linfty_ratio = std::max(r.max_linfty_ratio, linfty[i]);
  }
  r.mean_ratio = sum / samples;
  return r;
}

ContractionProbeReport run_contraction_probe(const RunConfig& cfg) {
  const Grid g = make_grid(cfg);
  ComplexField psi = make_initial(cfg, g);
  psi.values -= harmonic_lift(cfg.boundary, 0.0, g).qtilde.values;
  // the lift matches phi on the boundary up to roundoff; make it exact
  for (Index b : g.boundary_idx) psi.values[b] = 0.0;
  ContractionProbeReport r;
  r.T0 = cfg.probe.T0;
  const int sub = cfg.probe.substeps;
  r.at_T0 = contraction_probe(psi, cfg.boundary, g, cfg.kernel, r.T0, cfg.probe.M, cfg.probe.iterations, sub);
  r.at_half = contraction_probe(psi, cfg.boundary, g, cfg.kernel, 0.5 * r.T0, cfg.probe.M, cfg.probe.iterations,
                                sub);
  r.halving_ratio = r.at_T0.factor_est > 0.0 ? r.at_half.factor_est / r.at_T0.factor_est : 0.0;
  return r;
}

HardyProbeReport run_hardy_probe(int dim, Index n, double half_width, int samples, std::uint64_t seed) {
  const Grid g = build_probe_box(dim, half_width, n);
  std::vector<double> q(samples);
  parallel_for(samples, probe_thread_count(), [&](int i, int) {
    q[i] = hardy_quotient(random_recipe(seed, static_cast<std::uint64_t>(i), dim, true, true).sample(g), g, dim);
  });
  HardyProbeReport r;
  r.dim = dim;
  r.n = n;
  r.samples = samples;
  double sum = 0.0;
  for (double x : q) {
    r.max_quotient = std::max(r.max_quotient, x);
    sum += x;
  }
  r.mean_quotient = sum / samples;
  return r;
}

namespace {

double relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = a.cwiseAbs().maxCoeff();
  return scale > 0.0 ? (a - b).cwiseAbs().maxCoeff() / scale : (a - b).cwiseAbs().maxCoeff();
}

Eigen::VectorXd random_density(const Grid& g, std::uint64_t seed) {
  const ComplexField u = random_recipe(seed, 0, g.dim, false, true).sample(g);
  return u.values.cwiseAbs2();
}

// Mean seconds per call, repeating until at least `budget` seconds have passed.
template <typename Fn>
double time_per_call(Fn&& fn, double budget) {
  using clock = std::chrono::steady_clock;
  int calls = 0;
  const auto start = clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++calls;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < budget);
  return elapsed / calls;
}

}  // namespace

BenchReport bench_convolution(const KernelSpec& k, Index n_agree_1d, Index n_agree_2d, Index n_timing,
                              std::uint64_t seed) {
  BenchReport r;
  KernelSpec direct = k, fast = k;
  direct.backend = KernelBackend::Direct;
  fast.backend = KernelBackend::Fast;
  KernelSpec k1 = k;
  if (k1.family == KernelFamily::Coulomb) k1.family = KernelFamily::Softened;  // Coulomb is 2D only
  KernelSpec d1 = k1, f1 = k1;
  d1.backend = KernelBackend::Direct;
  f1.backend = KernelBackend::Fast;

  r.n_agree_1d = n_agree_1d;
  {
    const Grid g = build_grid(1, {{0.0, 1.0}}, {n_agree_1d});
    const Eigen::VectorXd rho = random_density(g, seed);
    const Convolver cd(g, d1), cf(g, f1);
    r.agreement_1d = relative_gap(cd.potential(rho), cf.potential(rho));
    r.agreement_gradient_1d = relative_gap(cd.potential_gradient(rho), cf.potential_gradient(rho));
  }
  r.n_agree_2d = n_agree_2d;
  {
    const Grid g = build_grid(2, {{0.0, 1.0}, {0.0, 1.0}}, {n_agree_2d, n_agree_2d});
    const Eigen::VectorXd rho = random_density(g, seed + 1);
    r.agreement_2d = relative_gap(Convolver(g, direct).potential(rho), Convolver(g, fast).potential(rho));
  }
  r.n_timing = n_timing;
  {
    const Grid g = build_grid(1, {{0.0, 1.0}}, {n_timing});
    const Eigen::VectorXd rho = random_density(g, seed + 2);
    const Convolver cd(g, d1), cf(g, f1);
    double sink = 0.0;
    r.direct_seconds = time_per_call([&] { sink += cd.potential(rho)[0]; }, 0.2);
    r.fast_seconds = time_per_call([&] { sink += cf.potential(rho)[0]; }, 0.2);
    if (!std::isfinite(sink)) r.direct_seconds = std::numeric_limits<double>::quiet_NaN();
    r.speedup = r.direct_seconds / r.fast_seconds;
  }
  return r;
}

nlohmann::json to_json(const LipschitzProbeReport& r) {
  return {{"n", r.n},           {"samples", r.samples}, {"max_ratio", r.max_ratio},
          {"mean_ratio", r.mean_ratio}, {"argmax", r.argmax}, {"max_linfty_ratio", r.max_linfty_ratio},
          {"finite", r.finite}};
}

namespace {

nlohmann::json contraction_json(const ContractionReport& c) {
  return {{"distances", c.distances},
          {"factors", c.factors},
          {"factor_est", c.factor_est},
          {"max_norm", c.max_norm},
          {"escaped", c.escaped}};
}

}  // namespace

nlohmann::json to_json(const ContractionProbeReport& r) {
  return {{"T0", r.T0},
          {"at_T0", contraction_json(r.at_T0)},
          {"at_half_T0", contraction_json(r.at_half)},
          {"halving_ratio", r.halving_ratio}};
}

nlohmann::json to_json(const HardyProbeReport& r) {
  return {{"dim", r.dim},
          {"n", r.n},
          {"samples", r.samples},
          {"max_quotient", r.max_quotient},
          {"mean_quotient", r.mean_quotient}};
}

nlohmann::json to_json(const BenchReport& r) {
  return {{"agreement_1d", {{"n", r.n_agree_1d}, {"relative", r.agreement_1d},
                            {"gradient_relative", r.agreement_gradient_1d}}},
          {"agreement_2d", {{"n", r.n_agree_2d}, {"relative", r.agreement_2d}}},
          {"timing", {{"n", r.n_timing}, {"direct_s", r.direct_seconds}, {"fast_s", r.fast_seconds},
                      {"speedup", r.speedup}}}};
}

}  // namespace hartree
