#include "hartree/driver.hpp"

#include <chrono>

namespace hartree {

namespace {

std::vector<Index> row_levels(Index last, int cadence) {
  std::vector<Index> out;
  for (Index k = 0; k <= last; k += cadence) out.push_back(k);
  if (out.back() != last) out.push_back(last);
  return out;
}

void finish_rows(SolveResult& r) {
  r.J = boundary_flux_J(r.history);
  r.rows = diagnostics_rows(r.history, r.records, r.J, r.config.cadence, &r.virial_rows);
}

void finish_apriori(SolveResult& r) {
  AprioriConstants fitted = calibrate_apriori(r.history, r.config.apriori_margin);
  r.calibrated = !r.config.apriori_C || !r.config.apriori_gronwall;
  r.constants = fitted;
  if (r.config.apriori_C) r.constants.C = *r.config.apriori_C;
  if (r.config.apriori_gronwall) r.constants.gronwall = *r.config.apriori_gronwall;
  r.apriori = apriori_inequality_check(r.history, r.constants);
}

}  // namespace

std::vector<DiagnosticsRow> diagnostics_rows(const std::vector<Observables>& history,
                                             const std::vector<StepRecord>& records, const std::vector<double>& J,
                                             int cadence, std::vector<VirialRow>* virial) {
  std::vector<DiagnosticsRow> rows;
  if (virial) virial->clear();
  if (history.empty()) return rows;
  const Index last = static_cast<Index>(history.size()) - 1;
  for (Index k : row_levels(last, cadence)) {
    const Observables& o = history[k];
    DiagnosticsRow row;
    row.step = k;
    row.t = o.t;
    row.mass = o.mass;
    row.energy = o.energy;
    row.J_cum = J[k];
    row.h1_norm = o.h1_norm;
    if (k < static_cast<Index>(records.size())) {
      row.picard_iters = records[k].picard_iters;
      row.contraction_est = records[k].contraction_est;
    }
    WindowResiduals w;
    if (last >= 2) {
      Stencil s = Stencil::Centered;
      Index first = k - 1;
      if (k == 0) s = Stencil::Forward, first = 0;
      else if (k == last) s = Stencil::Backward, first = last - 2;
      w = window_residuals({&history[first], &history[first + 1], &history[first + 2]}, s);
    } else {
      // too few levels for a time difference: report the right sides alone
      w.mass.rhs = o.mass_flux;
      w.mass.res = -w.mass.rhs;
      w.energy.rhs = o.energy_flux;
      w.energy.res = -w.energy.rhs;
      w.virial.terms = o.virial_terms;
      for (const Complex& term : o.virial_terms) w.virial.rhs += term;
      w.virial.res = -w.virial.rhs;
    }
    row.mass_lhs = w.mass.lhs;
    row.mass_rhs = w.mass.rhs;
    row.mass_res = w.mass.res;
    row.energy_lhs = w.energy.lhs;
    row.energy_rhs = w.energy.rhs;
    row.energy_res = w.energy.res;
    row.virial_lhs = w.virial.lhs.imag();
    row.virial_rhs = w.virial.rhs.imag();
    row.virial_res = std::abs(w.virial.res);
    rows.push_back(row);
    if (virial) virial->push_back({k, o.t, w.virial});
  }
  return rows;
}

SolveResult solve(const RunConfig& cfg, const SolveOptions& opts) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  auto result = std::make_shared<SolveResult>();
  SolveResult& r = *result;
  r.config = cfg;
  r.grid = make_grid(cfg);
  const Grid& g = r.grid;

  SolverState state;
  state.u = make_initial(cfg, g);
  const CompatibilityReport compat = validate_compatibility(state.u, cfg.boundary, g);
  if (!compat.pass)
    throw ConfigError("initial: incompatible with boundary data at t = 0 (mismatch " +
                      format_double(compat.max_mismatch) + ")");

  const CrankNicolsonStepper stepper(g, cfg.kernel, cfg.boundary, cfg.stepper);
  const XiField xi = build_xi_field(g);
  const Index steps = step_count(cfg);
  const double dt = cfg.stepper.dt;
  r.history.reserve(steps + 1);
  r.records.reserve(steps + 1);
  r.history.push_back(observe(state.u, 0.0, cfg.boundary, g, stepper.convolver(), xi));
  r.records.emplace_back();
  if (opts.keep_states) r.states.push_back(state.u);

  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  for (Index k = 0; k < steps; ++k) {
    const double t_next = static_cast<double>(k + 1) * dt;
    SolverState next;
    StepRecord rec;
    try {
      next = stepper.step(state, dt);
    } catch (const PicardDivergence& first) {
      bool recovered = false;
      std::string last_error = first.what();
      for (int h = 1; h <= cfg.max_halvings && !recovered; ++h) {
        ++r.retries;
        const Index sub = Index{1} << h;
        try {
          SolverState s = state;
          for (Index j = 0; j < sub; ++j) s = stepper.step(s, dt / static_cast<double>(sub));
          next = std::move(s);
          rec.halvings = h;
          recovered = true;
        } catch (const PicardDivergence& again) {
          last_error = again.what();
        }
      }
      if (!recovered) {
        r.complete = false;
        r.failed_step = k + 1;
        r.failure = last_error + " after " + std::to_string(cfg.max_halvings) + " dt halvings";
        r.final_state = state.u;
        finish_rows(r);
        finish_apriori(r);
        r.wall_seconds = elapsed();
        throw SolveFailure(r.failure, result);
      }
    }
    // pin the time to the grid so rounding in substeps does not accumulate
    next.t = t_next;
    rec.picard_iters = next.picard_iters;
    rec.contraction_est = next.contraction_est;
    rec.picard_diffs = next.picard_diffs;
    r.records.push_back(std::move(rec));
    r.history.push_back(observe(next.u, t_next, cfg.boundary, g, stepper.convolver(), xi));
    if (opts.keep_states) r.states.push_back(next.u);
    state = std::move(next);
  }

  r.final_state = state.u;
  finish_rows(r);
  finish_apriori(r);
  r.wall_seconds = elapsed();
  return std::move(r);
}

}  // namespace hartree
