#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hartree/boundary_data.hpp"
#include "hartree/convolution.hpp"
#include "hartree/stepper.hpp"

namespace hartree {

enum class InitialKind { Zero, Gaussian, LiftPlusBump };
enum class OutputFormat { Csv, Json };

struct GridSpec {
  int dim = 1;
  std::array<double, 2> x{0.0, 1.0};
  std::array<double, 2> y{0.0, 1.0};
  Index nx = 0;
  Index ny = 0;

  bool operator==(const GridSpec&) const = default;
};

struct InitialSpec {
  InitialKind kind = InitialKind::Zero;
  double center_x = 0.5;
  double center_y = 0.5;
  double width = 0.07;
  double amplitude = 1.0;

  bool operator==(const InitialSpec&) const = default;
};

struct ProbeSpec {
  int samples = 1000;
  double T0 = 0.1;
  double M = 100.0;
  int iterations = 8;
  int substeps = 16;
  int hardy_dim = 3;
  Index hardy_n = 33;
  double hardy_half_width = 1.0;
  int hardy_samples = 500;
  Index bench_n = 512;

  bool operator==(const ProbeSpec&) const = default;
};

struct RunConfig {
  GridSpec grid;
  KernelSpec kernel;
  BoundaryData boundary;
  InitialSpec initial;
  StepperConfig stepper;
  double T = 0.0;
  int cadence = 1;
  /// frozen multiplier for the a priori inequality; empty means calibrate on the run
  std::optional<double> apriori_C;
  /// frozen Gronwall envelope constant; empty means calibrate on the run
  std::optional<double> apriori_gronwall;
  double apriori_margin = 1.1;
  std::string output_dir = ".";
  OutputFormat output_format = OutputFormat::Csv;
  std::uint64_t seed = 1;
  int max_halvings = 3;
  ProbeSpec probe;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the flat `key = value` format (one pair per line, `#` comments).
/// Every problem found (syntax, unknown or duplicate keys, bad values, failed
/// validation) is collected into a single ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Writes every key, including defaults, so that parsing the text gives back `cfg`.
std::string to_config_text(const RunConfig& cfg);

/// key -> formatted value, the same pairs to_config_text writes
std::map<std::string, std::string> config_entries(const RunConfig& cfg);

/// Throws ConfigError listing every invalid field.
void validate(const RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);
/// Number of time steps, T / dt rounded; T must be a whole multiple of dt.
Index step_count(const RunConfig& cfg);
ComplexField make_initial(const RunConfig& cfg, const Grid& g);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace hartree
