#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "hartree/emit.hpp"
#include "hartree/probes.hpp"
#include "hartree/refinement.hpp"

using namespace hartree;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

void write_report(const std::string& dir, const std::string& name, const nlohmann::json& j) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  write_file((std::filesystem::path(dir) / name).string(), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
}

int run_solve(const RunConfig& cfg) {
  try {
    const SolveResult r = solve(cfg);
    write_solve_artifacts(r, cfg.output_dir, cfg.output_format);
    std::cout << summary_json(r).dump(2) << "\n";
    return kOk;
  } catch (const SolveFailure& f) {
    write_solve_artifacts(f.partial(), cfg.output_dir, cfg.output_format);
    std::cerr << "solver error: " << f.what() << "\n";
    return kSolver;
  }
}

int run_verify(const RunConfig& cfg, int levels) {
  const RefinementTable t = refinement_study(cfg, levels);
  write_report(cfg.output_dir, "refinement.json", to_json(t));
  return kOk;
}

int run_lipschitz(const RunConfig& cfg) {
  const auto coarse = run_lipschitz_probe(cfg, cfg.grid.nx, cfg.probe.samples, cfg.seed);
  const auto fine = run_lipschitz_probe(cfg, 2 * cfg.grid.nx, cfg.probe.samples, cfg.seed);
  nlohmann::json j = {{"coarse", to_json(coarse)},
                      {"fine", to_json(fine)},
                      {"relative_shift", std::abs(fine.max_ratio - coarse.max_ratio) / coarse.max_ratio}};
  write_report(cfg.output_dir, "probe_lipschitz.json", j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear Hartree equation with Dirichlet boundary forcing"};
  std::string command, config_path, out_dir, format;
  int levels = 3;
  std::uint64_t seed = 0;
  app.add_option("command", command, "solve | verify | probe-lipschitz | probe-contraction | probe-hardy | bench-convolution")
      ->required()
      ->check(CLI::IsMember({"solve", "verify", "probe-lipschitz", "probe-contraction", "probe-hardy",
                             "bench-convolution"}));
  app.add_option("--config", config_path, "flat key = value config file")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--format", format, "diagnostics format (overrides output.format)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--levels", levels, "refinement levels for verify")->check(CLI::Range(2, 8));
  auto* seed_opt = app.add_option("--seed", seed, "rng seed for probes (overrides seed)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    RunConfig cfg = parse_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!format.empty()) cfg.output_format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (*seed_opt) cfg.seed = seed;

    if (command == "solve") return run_solve(cfg);
    if (command == "verify") return run_verify(cfg, levels);
    if (command == "probe-lipschitz") return run_lipschitz(cfg);
    if (command == "probe-contraction") {
      write_report(cfg.output_dir, "probe_contraction.json", to_json(run_contraction_probe(cfg)));
      return kOk;
    }
    if (command == "probe-hardy") {
      const auto r = run_hardy_probe(cfg.probe.hardy_dim, cfg.probe.hardy_n, cfg.probe.hardy_half_width,
                                     cfg.probe.hardy_samples, cfg.seed);
      write_report(cfg.output_dir, "probe_hardy.json", to_json(r));
      return kOk;
    }
    const auto r = bench_convolution(cfg.kernel, 256, 64, cfg.probe.bench_n, cfg.seed);
    write_report(cfg.output_dir, "bench_convolution.json", to_json(r));
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
}
