#pragma once

#include <vector>

#include <json.hpp>

#include "hartree/driver.hpp"

namespace hartree {

struct RefinementLevel {
  Index nx = 0;
  double dx = 0.0;
  double dt = 0.0;
  double mass_res = 0.0;    ///< max |mass residual| over rows
  double energy_res = 0.0;
  double virial_res = 0.0;
  double mass_drift = 0.0;    ///< max |M(t) - M(0)| / M(0), or absolute when M(0) = 0
  double energy_drift = 0.0;  ///< max |E(t) - E(0)|
  double J_T = 0.0;
  double max_h1 = 0.0;
  double wall_seconds = 0.0;
};

/// Observed orders between consecutive levels, log2(e_l / e_{l+1}).
/// +inf marks an exact level pair (both zero, or the finer one zero).
struct RefinementTable {
  std::vector<RefinementLevel> levels;
  std::vector<double> mass_order, energy_order, virial_order;
  std::vector<double> mass_drift_order, energy_drift_order;
};

double observed_order(double coarse, double fine);

/// Level l uses n_l = (n_0 - 1) 2^l + 1 nodes per axis and dt_0 / 2^l, so both
/// dx and dt halve between levels. Levels run concurrently when `parallel`.
RefinementTable refinement_study(const RunConfig& base, int levels, bool parallel = true);

RunConfig refined_config(const RunConfig& base, int level);

nlohmann::json to_json(const RefinementTable& t);

}  // namespace hartree
