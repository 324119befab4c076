#include "support.hpp"

#include <filesystem>

#include "hartree/emit.hpp"
#include "hartree/refinement.hpp"

using namespace hartree;
using namespace hartree::test;

namespace {

const char* kMinimal = "grid.nx = 32\nstepper.dt = 1e-3\nstepper.T = 0.01\n";

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

RunConfig template_config() {
  RunConfig c = parse_config_text(
      "grid.dim = 1\ngrid.nx = 64\nstepper.dt = 2e-3\nstepper.T = 0.1\n"
      "boundary.amplitude = 0.5\nboundary.t0 = 0\nboundary.t1 = 0.08\nboundary.profile = left\n"
      "initial.kind = gaussian\ninitial.center_x = 0.5\ninitial.width = 0.07\n");
  return c;
}

}  // namespace

TEST_CASE("config: minimal file gets documented defaults") {
  const RunConfig c = parse_config_text(kMinimal);
  CHECK(c.grid.dim == 1);
  CHECK(c.grid.nx == 32);
  CHECK(c.grid.x == std::array<double, 2>{0.0, 1.0});
  CHECK(c.kernel == KernelSpec{});
  CHECK(c.stepper.picard_tol == 1e-10);
  CHECK(c.stepper.max_iters == 50);
  CHECK(c.cadence == 1);
  CHECK(c.max_halvings == 3);
  CHECK(c.initial.kind == InitialKind::Zero);
  CHECK(c.boundary.identically_zero());
  CHECK_FALSE(c.apriori_C.has_value());
}

TEST_CASE("config: errors") {
  CHECK(error_of(std::string(kMinimal) + "kernel.family = coulomb\n").find("coulomb requires dim=2") !=
        std::string::npos);
  const std::string unknown = error_of(std::string(kMinimal) + "# comment\nfoo=1\n");
  CHECK(unknown.find("foo") != std::string::npos);
  CHECK(unknown.find("line 5") != std::string::npos);
  CHECK(error_of("grid.nx = 32\n").find("stepper.dt") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "grid.nx = 40\n").find("duplicate") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "this line has no equals\n").find("line 4") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST_CASE("config: every offending key is reported at once") {
  const std::string msg = error_of(
      "grid.nx = 2\nstepper.dt = -1\nstepper.T = 0.5\ndiagnostics.cadence = 0\ninitial.width = 0\n");
  for (const char* key : {"grid.nx", "stepper", "diagnostics.cadence", "initial.width"})
    CHECK(msg.find(key) != std::string::npos);
  const std::string bad_values = error_of("grid.nx = abc\nstepper.dt = x\nstepper.T = 1\nkernel.backend = gpu\n");
  for (const char* key : {"grid.nx", "stepper.dt", "kernel.backend"}) CHECK(bad_values.find(key) != std::string::npos);
}

TEST_CASE("config: round trip through the text form") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RunConfig c = parse_config_text(kMinimal);
    c.grid.dim = trial % 2 + 1;
    c.grid.nx = 8 + trial;
    c.grid.ny = 5 + trial;
    c.grid.x = {-u(rng), 1.0 + u(rng)};
    c.grid.y = {u(rng) - 2.0, u(rng)};
    c.kernel.soften_a = 0.01 + u(rng);
    c.kernel.family = c.grid.dim == 2 && trial % 4 == 1 ? KernelFamily::Coulomb : KernelFamily::Softened;
    c.kernel.backend = trial % 3 ? KernelBackend::Fast : KernelBackend::Direct;
    c.kernel.strength = u(rng);
    c.boundary.amplitude = u(rng) / 3.0;
    c.boundary.t0 = u(rng);
    c.boundary.t1 = c.boundary.t0 + 0.1 + u(rng);
    c.boundary.omega = 10.0 * u(rng);
    c.boundary.profile = c.grid.dim == 1 && trial % 3 == 0 ? BoundaryProfile::Right : BoundaryProfile::Gaussian;
    c.boundary.center = Point(u(rng), u(rng), 0.0);
    c.boundary.sigma = 0.05 + u(rng);
    c.initial.kind = static_cast<InitialKind>(trial % 3);
    c.initial.width = 0.01 + u(rng);
    c.stepper.dt = 1e-3 * (1 + trial % 4);
    c.T = c.stepper.dt * (3 + trial);
    c.stepper.picard_tol = 1e-12 * (1.0 + u(rng));
    if (trial % 2) c.apriori_C = u(rng);
    c.output_format = trial % 2 ? OutputFormat::Json : OutputFormat::Csv;
    c.output_dir = "out/run" + std::to_string(trial);
    c.seed = rng();
    c.probe.T0 = u(rng);
    REQUIRE_NOTHROW(validate(c));
    CHECK(parse_config_text(to_config_text(c)) == c);
  }
}

TEST_CASE("csv: header only, zero row, bit-exact read back") {
  CHECK(rows_to_csv({}) == std::string(kCsvHeader) + "\n");
  const std::string one = rows_to_csv({DiagnosticsRow{}});
  CHECK(one == std::string(kCsvHeader) + "\n0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");

  const SolveResult r = solve(template_config());
  const std::string text = rows_to_csv(r.rows);
  const auto back = rows_from_csv(text);
  REQUIRE(back.size() == r.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == r.rows[i]);

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) CHECK(std::count(line.begin(), line.end(), ',') == 16);
  CHECK(rows_from_csv(rows_to_csv(r.rows, "at step 3: boom")) == r.rows);
}

TEST_CASE("solve: zero data gives all-zero rows") {
  RunConfig c = parse_config_text(kMinimal);
  const SolveResult r = solve(c);
  CHECK(r.complete);
  REQUIRE(r.rows.size() == 11);
  for (const auto& row : r.rows) {
    CHECK(row.mass == 0.0);
    CHECK(row.energy == 0.0);
    CHECK(row.mass_res == 0.0);
    CHECK(row.energy_res == 0.0);
    CHECK(row.virial_res == 0.0);
    CHECK(row.J_cum == 0.0);
    CHECK(row.h1_norm == 0.0);
  }
}

TEST_CASE("solve: cadence, determinism and incompatible data") {
  RunConfig c = template_config();
  c.cadence = 7;
  const SolveResult a = solve(c), b = solve(c);
  CHECK(rows_to_csv(a.rows) == rows_to_csv(b.rows));
  std::vector<Index> steps;
  for (const auto& r : a.rows) steps.push_back(r.step);
  CHECK(steps == std::vector<Index>{0, 7, 14, 21, 28, 35, 42, 49, 50});

  RunConfig bad = template_config();
  bad.boundary.t0 = -0.1;  // window open at t = 0 while phi vanishes at the wall
  CHECK_THROWS_AS(solve(bad), ConfigError);
}

TEST_CASE("solve: dt halving recovers a failing step and is counted") {
  RunConfig c = template_config();
  c.stepper.max_iters = 6;
  c.stepper.picard_tol = 1e-12;
  c.kernel.strength = 40.0;
  c.stepper.dt = 1e-2;
  c.T = 0.1;
  const SolveResult r = solve(c);
  CHECK(r.complete);
  CHECK(r.retries > 0);
  int halved = 0;
  for (const auto& rec : r.records) halved += rec.halvings > 0;
  CHECK(halved > 0);

  c.max_halvings = 0;
  try {
    solve(c);
    FAIL("expected failure without halvings");
  } catch (const SolveFailure& f) {
    CHECK_FALSE(f.partial().complete);
    CHECK(f.partial().failed_step >= 1);
    CHECK(f.partial().history.size() == static_cast<std::size_t>(f.partial().failed_step));
    const std::string csv = rows_to_csv(f.partial().rows, "at step " + std::to_string(f.partial().failed_step));
    CHECK(csv.find("# truncated at step") != std::string::npos);
  }
}

TEST_CASE("artifacts are written and the summary carries the run metadata") {
  const auto dir = std::filesystem::temp_directory_path() / "hartree_bvp_app_test";
  std::filesystem::remove_all(dir);
  const SolveResult r = solve(template_config());
  write_solve_artifacts(r, dir.string(), OutputFormat::Csv);
  for (const char* f : {"diagnostics.csv", "virial_terms.csv", "apriori.csv", "summary.json"})
    CHECK(std::filesystem::exists(dir / f));
  const auto j = nlohmann::json::parse(read_file((dir / "summary.json").string()));
  CHECK(j["config"]["grid.nx"] == "64");
  CHECK(j.contains("retries"));
  CHECK(j.contains("wall_time_s"));
  CHECK(j["constants"]["C"].get<double>() == r.constants.C);
  CHECK(rows_from_csv(read_file((dir / "diagnostics.csv").string())) == r.rows);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/file.csv", "x"), IoError);
}

TEST_CASE("refinement: zero data is exact, linear regime mass order") {
  const RefinementTable zero = refinement_study(parse_config_text(kMinimal), 3);
  for (double o : zero.mass_order) CHECK(std::isinf(o));
  for (double o : zero.energy_order) CHECK(std::isinf(o));

  RunConfig lin = template_config();
  lin.kernel.strength = 0.0;
  const RefinementTable t = refinement_study(lin, 3);
  for (double o : t.mass_order) CHECK(o >= 1.7);
}
