#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hartree/diagnostics.hpp"
#include "hartree/run_config.hpp"

namespace hartree {

/// One line of the diagnostics CSV. virial_lhs and virial_rhs carry the
/// imaginary parts (the identity's time derivative is purely imaginary for
/// the exact solution); virial_res is the modulus of the complex residual.
struct DiagnosticsRow {
  Index step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double mass_lhs = 0.0, mass_rhs = 0.0, mass_res = 0.0;
  double energy_lhs = 0.0, energy_rhs = 0.0, energy_res = 0.0;
  double virial_lhs = 0.0, virial_rhs = 0.0, virial_res = 0.0;
  double J_cum = 0.0;
  double h1_norm = 0.0;
  int picard_iters = 0;
  double contraction_est = 0.0;

  bool operator==(const DiagnosticsRow&) const = default;
};

/// Full complex virial breakdown for the row with the same step.
struct VirialRow {
  Index step = 0;
  double t = 0.0;
  VirialResidual residual;
};

/// Per time level: what the step that produced it needed.
struct StepRecord {
  int picard_iters = 0;
  double contraction_est = 0.0;
  std::vector<double> picard_diffs;
  /// dt halvings used to get past this step (0 when the plain step converged)
  int halvings = 0;
};

struct SolveResult {
  RunConfig config;
  Grid grid;
  /// observables at every time level 0..steps
  std::vector<Observables> history;
  /// records[k] describes the step that produced level k; records[0] is empty
  std::vector<StepRecord> records;
  std::vector<DiagnosticsRow> rows;
  std::vector<VirialRow> virial_rows;
  std::vector<double> J;
  AprioriConstants constants;
  bool calibrated = false;
  AprioriReport apriori;
  /// final state (or the last state reached before a failure)
  ComplexField final_state;
  std::vector<ComplexField> states;  ///< filled only with SolveOptions::keep_states
  int retries = 0;
  double wall_seconds = 0.0;
  bool complete = true;
  Index failed_step = -1;
  std::string failure;
};

struct SolveOptions {
  bool keep_states = false;
};

/// Raised when a step fails even after every allowed dt halving. Carries the
/// partial result up to the last good level.
class SolveFailure : public SolverError {
 public:
  SolveFailure(const std::string& what, std::shared_ptr<SolveResult> partial)
      : SolverError(what), partial_(std::move(partial)) {}
  const SolveResult& partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<SolveResult> partial_;
};

/// Runs the configured trajectory from t = 0 to T. A step that raises
/// PicardDivergence is redone as 2, 4, ... substeps up to 2^max_halvings.
SolveResult solve(const RunConfig& cfg, const SolveOptions& opts = {});

/// Rows at every `cadence`-th level plus the last one. Interior levels use
/// centred time differences, the first and last levels one-sided ones.
std::vector<DiagnosticsRow> diagnostics_rows(const std::vector<Observables>& history,
                                             const std::vector<StepRecord>& records, const std::vector<double>& J,
                                             int cadence, std::vector<VirialRow>* virial = nullptr);

}  // namespace hartree
