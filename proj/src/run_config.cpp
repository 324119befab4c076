#include "hartree/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "hartree/lifting.hpp"

namespace hartree {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Each setter returns an empty string on success, else what was wrong with the value.
using Setter = std::function<std::string(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

std::string read_double(const std::string& text, double& out) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return "expected a finite number, got '" + text + "'";
  out = v;
  return {};
}

template <typename Int>
std::string read_int(const std::string& text, Int& out) {
  Int v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return "expected an integer, got '" + text + "'";
  out = v;
  return {};
}

template <typename T>
Field number(std::string key, T RunConfig::*member) {
  return {key,
          [member](RunConfig& c, const std::string& v) {
            if constexpr (std::is_floating_point_v<T>) return read_double(v, c.*member);
            else return read_int(v, c.*member);
          },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
            else return std::to_string(c.*member);
          }};
}

// Same as `number` but for a member of a nested struct.
template <typename Outer, typename T>
Field nested(std::string key, Outer RunConfig::*outer, T Outer::*member) {
  return {key,
          [outer, member](RunConfig& c, const std::string& v) {
            if constexpr (std::is_floating_point_v<T>) return read_double(v, c.*outer.*member);
            else return read_int(v, c.*outer.*member);
          },
          [outer, member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*outer.*member);
            else return std::to_string(c.*outer.*member);
          }};
}

template <typename E>
Field choice(std::string key, std::function<E&(RunConfig&)> ref, std::vector<std::pair<std::string, E>> names) {
  return {key,
          [ref, names](RunConfig& c, const std::string& v) -> std::string {
            for (const auto& [name, value] : names)
              if (name == v) {
                ref(c) = value;
                return {};
              }
            std::string allowed;
            for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : "|") + name;
            return "expected one of " + allowed + ", got '" + v + "'";
          },
          [ref, names](const RunConfig& c) -> std::string {
            const E value = ref(const_cast<RunConfig&>(c));
            for (const auto& [name, candidate] : names)
              if (candidate == value) return name;
            return {};
          }};
}

// "auto" or a number
Field optional_number(std::string key, std::optional<double> RunConfig::*member) {
  return {key,
          [member](RunConfig& c, const std::string& v) -> std::string {
            if (v == "auto") {
              (c.*member).reset();
              return {};
            }
            double x = 0.0;
            if (!read_double(v, x).empty()) return "expected 'auto' or a number, got '" + v + "'";
            c.*member = x;
            return {};
          },
          [member](const RunConfig& c) { return c.*member ? format_double(*(c.*member)) : std::string("auto"); }};
}

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back(nested("grid.dim", &RunConfig::grid, &GridSpec::dim));
    f.push_back({"grid.xmin", [](RunConfig& c, const std::string& v) { return read_double(v, c.grid.x[0]); },
                 [](const RunConfig& c) { return format_double(c.grid.x[0]); }});
    f.push_back({"grid.xmax", [](RunConfig& c, const std::string& v) { return read_double(v, c.grid.x[1]); },
                 [](const RunConfig& c) { return format_double(c.grid.x[1]); }});
    f.push_back({"grid.ymin", [](RunConfig& c, const std::string& v) { return read_double(v, c.grid.y[0]); },
                 [](const RunConfig& c) { return format_double(c.grid.y[0]); }});
    f.push_back({"grid.ymax", [](RunConfig& c, const std::string& v) { return read_double(v, c.grid.y[1]); },
                 [](const RunConfig& c) { return format_double(c.grid.y[1]); }});
    f.push_back(nested("grid.nx", &RunConfig::grid, &GridSpec::nx));
    f.push_back(nested("grid.ny", &RunConfig::grid, &GridSpec::ny));

    f.push_back(choice<KernelFamily>("kernel.family", [](RunConfig& c) -> KernelFamily& { return c.kernel.family; },
                                     {{"softened", KernelFamily::Softened}, {"coulomb", KernelFamily::Coulomb}}));
    f.push_back(nested("kernel.soften_a", &RunConfig::kernel, &KernelSpec::soften_a));
    f.push_back(choice<KernelBackend>("kernel.backend", [](RunConfig& c) -> KernelBackend& { return c.kernel.backend; },
                                      {{"fast", KernelBackend::Fast}, {"direct", KernelBackend::Direct}}));
    f.push_back(nested("kernel.strength", &RunConfig::kernel, &KernelSpec::strength));

    f.push_back(nested("boundary.amplitude", &RunConfig::boundary, &BoundaryData::amplitude));
    f.push_back(nested("boundary.t0", &RunConfig::boundary, &BoundaryData::t0));
    f.push_back(nested("boundary.t1", &RunConfig::boundary, &BoundaryData::t1));
    f.push_back(nested("boundary.omega", &RunConfig::boundary, &BoundaryData::omega));
    f.push_back(choice<BoundaryProfile>(
        "boundary.profile", [](RunConfig& c) -> BoundaryProfile& { return c.boundary.profile; },
        {{"uniform", BoundaryProfile::Uniform},
         {"left", BoundaryProfile::Left},
         {"right", BoundaryProfile::Right},
         {"gaussian", BoundaryProfile::Gaussian}}));
    f.push_back({"boundary.center_x",
                 [](RunConfig& c, const std::string& v) { return read_double(v, c.boundary.center[0]); },
                 [](const RunConfig& c) { return format_double(c.boundary.center[0]); }});
    f.push_back({"boundary.center_y",
                 [](RunConfig& c, const std::string& v) { return read_double(v, c.boundary.center[1]); },
                 [](const RunConfig& c) { return format_double(c.boundary.center[1]); }});
    f.push_back(nested("boundary.sigma", &RunConfig::boundary, &BoundaryData::sigma));

    f.push_back(choice<InitialKind>("initial.kind", [](RunConfig& c) -> InitialKind& { return c.initial.kind; },
                                    {{"zero", InitialKind::Zero},
                                     {"gaussian", InitialKind::Gaussian},
                                     {"lift_plus_bump", InitialKind::LiftPlusBump}}));
    f.push_back(nested("initial.center_x", &RunConfig::initial, &InitialSpec::center_x));
    f.push_back(nested("initial.center_y", &RunConfig::initial, &InitialSpec::center_y));
    f.push_back(nested("initial.width", &RunConfig::initial, &InitialSpec::width));
    f.push_back(nested("initial.amplitude", &RunConfig::initial, &InitialSpec::amplitude));

    f.push_back(nested("stepper.dt", &RunConfig::stepper, &StepperConfig::dt));
    f.push_back(number("stepper.T", &RunConfig::T));
    f.push_back(nested("stepper.picard_tol", &RunConfig::stepper, &StepperConfig::picard_tol));
    f.push_back(nested("stepper.max_iters", &RunConfig::stepper, &StepperConfig::max_iters));

    f.push_back(number("diagnostics.cadence", &RunConfig::cadence));
    f.push_back(optional_number("apriori.C", &RunConfig::apriori_C));
    f.push_back(optional_number("apriori.gronwall", &RunConfig::apriori_gronwall));
    f.push_back(number("apriori.margin", &RunConfig::apriori_margin));
    f.push_back({"output.dir",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   if (v.empty()) return "expected a path";
                   c.output_dir = v;
                   return {};
                 },
                 [](const RunConfig& c) { return c.output_dir; }});
    f.push_back(choice<OutputFormat>("output.format", [](RunConfig& c) -> OutputFormat& { return c.output_format; },
                                     {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}}));
    f.push_back(number("seed", &RunConfig::seed));
    f.push_back(number("retry.max_halvings", &RunConfig::max_halvings));

    f.push_back(nested("probe.samples", &RunConfig::probe, &ProbeSpec::samples));
    f.push_back(nested("probe.T0", &RunConfig::probe, &ProbeSpec::T0));
    f.push_back(nested("probe.M", &RunConfig::probe, &ProbeSpec::M));
    f.push_back(nested("probe.iterations", &RunConfig::probe, &ProbeSpec::iterations));
    f.push_back(nested("probe.substeps", &RunConfig::probe, &ProbeSpec::substeps));
    f.push_back(nested("hardy.dim", &RunConfig::probe, &ProbeSpec::hardy_dim));
    f.push_back(nested("hardy.n", &RunConfig::probe, &ProbeSpec::hardy_n));
    f.push_back(nested("hardy.half_width", &RunConfig::probe, &ProbeSpec::hardy_half_width));
    f.push_back(nested("hardy.samples", &RunConfig::probe, &ProbeSpec::hardy_samples));
    f.push_back(nested("bench.n", &RunConfig::probe, &ProbeSpec::bench_n));
    return f;
  }();
  return fields;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : schema())
    if (f.key == key) return &f;
  return nullptr;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

// Runs a validator and turns a ConfigError into a report line prefixed with the key.
template <typename Fn>
void check(std::vector<std::string>& errors, const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    errors.push_back(key + ": " + e.what());
  }
}

std::vector<std::string> validation_errors(const RunConfig& c) {
  std::vector<std::string> errors;
  const auto need = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) errors.push_back(key + ": " + msg);
  };
  need(c.grid.dim == 1 || c.grid.dim == 2, "grid.dim", "must be 1 or 2");
  need(c.grid.nx >= 4, "grid.nx", "need at least 4 nodes");
  need(c.grid.x[0] < c.grid.x[1], "grid.xmin", "need xmin < xmax");
  if (c.grid.dim == 2) {
    need(c.grid.ny >= 4, "grid.ny", "need at least 4 nodes");
    need(c.grid.y[0] < c.grid.y[1], "grid.ymin", "need ymin < ymax");
  }
  if (c.grid.dim == 1 || c.grid.dim == 2) {
    check(errors, "kernel.family", [&] { validate(c.kernel, c.grid.dim); });
    check(errors, "boundary", [&] { validate(c.boundary, c.grid.dim); });
  }
  check(errors, "stepper", [&] { validate(c.stepper); });
  need(c.T > 0.0, "stepper.T", "must be positive");
  if (c.T > 0.0 && c.stepper.dt > 0.0) {
    const double steps = c.T / c.stepper.dt;
    need(std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps), "stepper.T",
         "must be a whole multiple of stepper.dt");
  }
  need(c.initial.width > 0.0, "initial.width", "must be positive");
  need(c.cadence >= 1, "diagnostics.cadence", "must be at least 1");
  need(!c.apriori_C || *c.apriori_C >= 0.0, "apriori.C", "must be 'auto' or non-negative");
  need(!c.apriori_gronwall || *c.apriori_gronwall >= 0.0, "apriori.gronwall", "must be 'auto' or non-negative");
  need(c.apriori_margin >= 1.0, "apriori.margin", "must be at least 1");
  need(c.max_halvings >= 0 && c.max_halvings <= 20, "retry.max_halvings", "must lie in [0, 20]");
  need(c.probe.samples >= 1, "probe.samples", "must be at least 1");
  need(c.probe.T0 > 0.0, "probe.T0", "must be positive");
  need(c.probe.M > 0.0, "probe.M", "must be positive");
  need(c.probe.iterations >= 2, "probe.iterations", "must be at least 2");
  need(c.probe.substeps >= 1, "probe.substeps", "must be at least 1");
  need(c.probe.hardy_dim >= 1 && c.probe.hardy_dim <= 3, "hardy.dim", "must be 1, 2 or 3");
  need(c.probe.hardy_n >= 4, "hardy.n", "need at least 4 nodes");
  need(c.probe.hardy_half_width > 0.0, "hardy.half_width", "must be positive");
  need(c.probe.hardy_samples >= 1, "hardy.samples", "must be at least 1");
  need(c.probe.bench_n >= 4, "bench.n", "need at least 4 nodes");
  return errors;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::logic_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (eq == std::string::npos) {
      errors.push_back("expected key = value, got '" + line + "'" + where);
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* field = find_field(key);
    if (!field) {
      errors.push_back("unknown key '" + key + "'" + where);
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back("duplicate key '" + key + "'" + where);
      continue;
    }
    if (auto err = field->set(cfg, value); !err.empty()) errors.push_back(key + ": " + err + where);
  }
  for (const char* key : {"grid.nx", "stepper.dt", "stepper.T"})
    if (!seen.count(key)) errors.push_back(std::string(key) + ": required");
  if (cfg.grid.dim == 2 && !seen.count("grid.ny")) errors.push_back("grid.ny: required when grid.dim = 2");
  if (errors.empty()) errors = validation_errors(cfg);
  if (!errors.empty()) throw ConfigError(join(errors));
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, std::string> config_entries(const RunConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& f : schema()) out[f.key] = f.get(cfg);
  return out;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : schema()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

void validate(const RunConfig& cfg) {
  const auto errors = validation_errors(cfg);
  if (!errors.empty()) throw ConfigError(join(errors));
}

Grid make_grid(const RunConfig& cfg) {
  if (cfg.grid.dim == 1) return build_grid(1, {cfg.grid.x}, {cfg.grid.nx});
  return build_grid(2, {cfg.grid.x, cfg.grid.y}, {cfg.grid.nx, cfg.grid.ny});
}

Index step_count(const RunConfig& cfg) { return static_cast<Index>(std::llround(cfg.T / cfg.stepper.dt)); }

ComplexField make_initial(const RunConfig& cfg, const Grid& g) {
  const InitialSpec& ic = cfg.initial;
  const Point c(ic.center_x, ic.center_y, 0.0);
  const auto bump = [&](const Point& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
    return ic.amplitude * std::exp(-r2 / (2.0 * ic.width * ic.width));
  };
  switch (ic.kind) {
    case InitialKind::Zero:
      return zeros<Complex>(g);
    case InitialKind::Gaussian:
      return sample<Complex>(g, bump);
    case InitialKind::LiftPlusBump: {
      // the sine factor pins the bump to zero on the boundary, so the lift carries q(., 0) alone
      ComplexField u = harmonic_lift(cfg.boundary, 0.0, g).qtilde;
      for (Index p = 0; p < g.size(); ++p) {
        const Point x = g.point(p);
        double s = 1.0;
        for (int d = 0; d < g.dim; ++d) s *= std::sin(M_PI * (x[d] - g.lo[d]) / (g.hi[d] - g.lo[d]));
        u.values[p] += bump(x) * s;
      }
      for (Index b : g.boundary_idx) u.values[b] = cfg.boundary.value(g, b, 0.0);
      return u;
    }
  }
  return zeros<Complex>(g);
}

}  // namespace hartree
