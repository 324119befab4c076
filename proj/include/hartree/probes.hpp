#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hartree/contraction.hpp"
#include "hartree/run_config.hpp"

namespace hartree {

/// Worker count for probes: HARTREE_BVP_THREADS when set and positive,
/// otherwise the hardware concurrency.
int probe_thread_count();

/// Smooth random field defined in the unit coordinates s = (x - lo) / (hi - lo)
/// of a grid, so the same recipe can be sampled at any resolution.
struct FieldRecipe {
  /// tensor modes (m_x, m_y, m_z); per axis, even m gives cos(m/2 pi s) and
  /// odd m gives sin((m+1)/2 pi s)
  std::vector<std::array<int, 3>> modes;
  std::vector<Complex> coeffs;
  /// Gaussian bumps (centre in unit coordinates, width in units of the extent)
  std::vector<Point> bump_centers;
  std::vector<double> bump_widths;
  std::vector<Complex> bump_amps;
  /// multiply by prod sin(pi s_d) and zero the boundary nodes
  bool vanishing = false;

  ComplexField sample(const Grid& g) const;
};

/// Deterministic in (seed, index) and independent of any other draw.
FieldRecipe random_recipe(std::uint64_t seed, std::uint64_t index, int dim, bool vanishing, bool bumps);

struct LipschitzProbeReport {
  Index n = 0;
  int samples = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  Index argmax = -1;
  double max_linfty_ratio = 0.0;  ///< max f(u) / ||u||_H1^2 over the v fields
  bool finite = true;
};

/// Ratios ||f(v)v - f(w)w||_H1 / ((||v||^2 + ||w||^2) ||v - w||_H1) over seeded
/// pairs on the config's grid with nx replaced by `n`. Pairs cycle through
/// independent fields, nearby fields and w = 0.
LipschitzProbeReport run_lipschitz_probe(const RunConfig& cfg, Index n, int samples, std::uint64_t seed);

struct ContractionProbeReport {
  double T0 = 0.0;
  ContractionReport at_T0;
  ContractionReport at_half;
  double halving_ratio = 0.0;  ///< factor_est(T0 / 2) / factor_est(T0)
};

/// Homogenised probe of the configured run: psi = phi - Q~(0).
ContractionProbeReport run_contraction_probe(const RunConfig& cfg);

struct HardyProbeReport {
  int dim = 3;
  Index n = 0;
  int samples = 0;
  double max_quotient = 0.0;
  double mean_quotient = 0.0;
};

HardyProbeReport run_hardy_probe(int dim, Index n, double half_width, int samples, std::uint64_t seed);

struct BenchReport {
  Index n_agree_1d = 0;
  Index n_agree_2d = 0;
  double agreement_1d = 0.0;  ///< max |direct - fast| / max |direct|
  double agreement_2d = 0.0;
  double agreement_gradient_1d = 0.0;
  Index n_timing = 0;
  double direct_seconds = 0.0;  ///< per potential evaluation
  double fast_seconds = 0.0;
  double speedup = 0.0;
};

BenchReport bench_convolution(const KernelSpec& k, Index n_agree_1d, Index n_agree_2d, Index n_timing,
                              std::uint64_t seed);

nlohmann::json to_json(const LipschitzProbeReport& r);
nlohmann::json to_json(const ContractionProbeReport& r);
nlohmann::json to_json(const HardyProbeReport& r);
nlohmann::json to_json(const BenchReport& r);

}  // namespace hartree
