#include "hartree/refinement.hpp"

#include <cmath>
#include <future>
#include <limits>

namespace hartree {

double observed_order(double coarse, double fine) {
  coarse = std::abs(coarse);
  fine = std::abs(fine);
  if (fine == 0.0) return std::numeric_limits<double>::infinity();
  if (coarse == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

RunConfig refined_config(const RunConfig& base, int level) {
  RunConfig c = base;
  const Index f = Index{1} << level;
  c.grid.nx = (base.grid.nx - 1) * f + 1;
  if (base.grid.dim == 2) c.grid.ny = (base.grid.ny - 1) * f + 1;
  c.stepper.dt = base.stepper.dt / static_cast<double>(f);
  c.cadence = base.cadence * static_cast<int>(f);
  return c;
}

namespace {

RefinementLevel run_level(const RunConfig& cfg) {
  const SolveResult r = solve(cfg);
  RefinementLevel L;
  L.nx = cfg.grid.nx;
  L.dx = (cfg.grid.x[1] - cfg.grid.x[0]) / static_cast<double>(cfg.grid.nx - 1);
  L.dt = cfg.stepper.dt;
  for (const auto& row : r.rows) {
    L.mass_res = std::max(L.mass_res, std::abs(row.mass_res));
    L.energy_res = std::max(L.energy_res, std::abs(row.energy_res));
    L.virial_res = std::max(L.virial_res, std::abs(row.virial_res));
  }
  const double m0 = r.history.front().mass;
  const double e0 = r.history.front().energy;
  for (const auto& o : r.history) {
    L.mass_drift = std::max(L.mass_drift, std::abs(o.mass - m0) / (m0 > 0.0 ? m0 : 1.0));
    L.energy_drift = std::max(L.energy_drift, std::abs(o.energy - e0));
    L.max_h1 = std::max(L.max_h1, o.h1_norm);
  }
  L.J_T = r.J.back();
  L.wall_seconds = r.wall_seconds;
  return L;
}

}  // namespace

RefinementTable refinement_study(const RunConfig& base, int levels, bool parallel) {
  if (levels < 2) throw ConfigError("refinement needs at least 2 levels");
  validate(base);
  RefinementTable t;
  if (parallel) {
    std::vector<std::future<RefinementLevel>> jobs;
    for (int l = 0; l < levels; ++l)
      jobs.push_back(std::async(std::launch::async, run_level, refined_config(base, l)));
    for (auto& j : jobs) t.levels.push_back(j.get());
  } else {
    for (int l = 0; l < levels; ++l) t.levels.push_back(run_level(refined_config(base, l)));
  }
  for (int l = 0; l + 1 < levels; ++l) {
    const RefinementLevel& a = t.levels[l];
    const RefinementLevel& b = t.levels[l + 1];
    t.mass_order.push_back(observed_order(a.mass_res, b.mass_res));
    t.energy_order.push_back(observed_order(a.energy_res, b.energy_res));
    t.virial_order.push_back(observed_order(a.virial_res, b.virial_res));
    t.mass_drift_order.push_back(observed_order(a.mass_drift, b.mass_drift));
    t.energy_drift_order.push_back(observed_order(a.energy_drift, b.energy_drift));
  }
  return t;
}

namespace {

// JSON has no infinity; exact pairs are reported as the string "exact".
nlohmann::json order_json(const std::vector<double>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : v) {
    if (std::isinf(x)) arr.push_back(x > 0 ? "exact" : "-inf");
    else arr.push_back(x);
  }
  return arr;
}

}  // namespace

nlohmann::json to_json(const RefinementTable& t) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& L : t.levels)
    levels.push_back({{"nx", L.nx},
                      {"dx", L.dx},
                      {"dt", L.dt},
                      {"mass_res", L.mass_res},
                      {"energy_res", L.energy_res},
                      {"virial_res", L.virial_res},
                      {"mass_drift", L.mass_drift},
                      {"energy_drift", L.energy_drift},
                      {"J_T", L.J_T},
                      {"max_h1_norm", L.max_h1},
                      {"wall_time_s", L.wall_seconds}});
  return {{"levels", levels},
          {"orders",
           {{"mass_res", order_json(t.mass_order)},
            {"energy_res", order_json(t.energy_order)},
            {"virial_res", order_json(t.virial_order)},
            {"mass_drift", order_json(t.mass_drift_order)},
            {"energy_drift", order_json(t.energy_drift_order)}}}};
}

}  // namespace hartree
