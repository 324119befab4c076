#include "hartree/emit.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hartree {

namespace {

double parse_double(const std::string& s, int lineno) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, int lineno) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("csv line " + std::to_string(lineno) + ": bad integer '" + s + "'");
  return v;
}

double max_abs(const std::vector<DiagnosticsRow>& rows, double DiagnosticsRow::*field) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.*field));
  return m;
}

}  // namespace

std::string csv_line(const DiagnosticsRow& r) {
  std::string s = std::to_string(r.step);
  for (double v : {r.t, r.mass, r.energy, r.mass_lhs, r.mass_rhs, r.mass_res, r.energy_lhs, r.energy_rhs,
                   r.energy_res, r.virial_lhs, r.virial_rhs, r.virial_res, r.J_cum, r.h1_norm})
    s += "," + format_double(v);
  s += "," + std::to_string(r.picard_iters);
  s += "," + format_double(r.contraction_est);
  return s;
}

std::string rows_to_csv(const std::vector<DiagnosticsRow>& rows, const std::string& truncation) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) out += csv_line(r) + "\n";
  if (!truncation.empty()) out += "# truncated " + truncation + "\n";
  return out;
}

std::vector<DiagnosticsRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<DiagnosticsRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw IoError("csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 17)
      throw IoError("csv line " + std::to_string(lineno) + ": expected 17 columns, got " +
                    std::to_string(cells.size()));
    DiagnosticsRow r;
    r.step = parse_int<Index>(cells[0], lineno);
    double* fields[] = {&r.t,          &r.mass,       &r.energy,     &r.mass_lhs, &r.mass_rhs,
                        &r.mass_res,   &r.energy_lhs, &r.energy_rhs, &r.energy_res,
                        &r.virial_lhs, &r.virial_rhs, &r.virial_res, &r.J_cum,    &r.h1_norm};
    for (int i = 0; i < 14; ++i) *fields[i] = parse_double(cells[i + 1], lineno);
    r.picard_iters = parse_int<int>(cells[15], lineno);
    r.contraction_est = parse_double(cells[16], lineno);
    rows.push_back(r);
  }
  if (!header) throw IoError("csv: missing header");
  return rows;
}

nlohmann::json rows_to_json(const std::vector<DiagnosticsRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"step", r.step},
                   {"t", r.t},
                   {"mass", r.mass},
                   {"energy", r.energy},
                   {"mass_lhs", r.mass_lhs},
                   {"mass_rhs", r.mass_rhs},
                   {"mass_res", r.mass_res},
                   {"energy_lhs", r.energy_lhs},
                   {"energy_rhs", r.energy_rhs},
                   {"energy_res", r.energy_res},
                   {"virial_lhs", r.virial_lhs},
                   {"virial_rhs", r.virial_rhs},
                   {"virial_res", r.virial_res},
                   {"J_cum", r.J_cum},
                   {"h1_norm", r.h1_norm},
                   {"picard_iters", r.picard_iters},
                   {"contraction_est", r.contraction_est}});
  return arr;
}

std::string virial_terms_csv(const std::vector<VirialRow>& rows) {
  std::string out = "step,t,lhs_re,lhs_im";
  for (const auto& name : kVirialTermNames) out += "," + name + "_re," + name + "_im";
  out += ",rhs_re,rhs_im,res_re,res_im\n";
  for (const auto& row : rows) {
    const VirialResidual& v = row.residual;
    std::string line = std::to_string(row.step) + "," + format_double(row.t);
    const auto put = [&](Complex z) { line += "," + format_double(z.real()) + "," + format_double(z.imag()); };
    put(v.lhs);
    for (const Complex& term : v.terms) put(term);
    put(v.rhs);
    put(v.res);
    out += line + "\n";
  }
  return out;
}

std::string apriori_csv(const AprioriReport& a, const std::vector<double>& J) {
  std::string out = "t,J,lhs,rhs,margin,gronwall_rhs\n";
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    out += format_double(a.t[i]) + "," + format_double(i < J.size() ? J[i] : 0.0) + "," + format_double(a.lhs[i]) +
           "," + format_double(a.rhs[i]) + "," + format_double(a.margin[i]) + "," +
           format_double(i < a.gronwall_rhs.size() ? a.gronwall_rhs[i] : 0.0) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const SolveResult& r) {
  nlohmann::json j;
  j["config"] = config_entries(r.config);
  j["complete"] = r.complete;
  if (!r.complete) {
    j["failed_step"] = r.failed_step;
    j["failure"] = r.failure;
  }
  j["steps"] = r.history.empty() ? 0 : static_cast<Index>(r.history.size()) - 1;
  j["retries"] = r.retries;
  j["wall_time_s"] = r.wall_seconds;
  j["constants"] = {{"C", r.constants.C},
                    {"gronwall", r.constants.gronwall},
                    {"margin_factor", r.constants.margin_factor},
                    {"calibrated_on_this_run", r.calibrated}};
  j["apriori"] = {{"pass", r.apriori.pass},
                  {"worst_margin", r.apriori.worst_margin},
                  {"gronwall_pass", r.apriori.gronwall_pass},
                  {"worst_gronwall_margin", r.apriori.worst_gronwall_margin}};
  double max_h1 = 0.0;
  for (const auto& o : r.history) max_h1 = std::max(max_h1, o.h1_norm);
  int max_iters = 0;
  double max_contraction = 0.0;
  for (const auto& rec : r.records) {
    max_iters = std::max(max_iters, rec.picard_iters);
    max_contraction = std::max(max_contraction, rec.contraction_est);
  }
  j["max_h1_norm"] = max_h1;
  j["J_T"] = r.J.empty() ? 0.0 : r.J.back();
  j["max_picard_iters"] = max_iters;
  j["max_contraction_est"] = max_contraction;
  j["max_abs_residual"] = {{"mass", max_abs(r.rows, &DiagnosticsRow::mass_res)},
                           {"energy", max_abs(r.rows, &DiagnosticsRow::energy_res)},
                           {"virial", max_abs(r.rows, &DiagnosticsRow::virial_res)}};
  nlohmann::json terms;
  for (std::size_t i = 0; i < kVirialTerms; ++i) {
    double m = 0.0;
    for (const auto& v : r.virial_rows) m = std::max(m, std::abs(v.residual.terms[i]));
    terms[kVirialTermNames[i]] = m;
  }
  j["max_abs_virial_term"] = terms;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_rows(const std::vector<DiagnosticsRow>& rows, OutputFormat format, const std::string& path,
                const std::string& truncation) {
  if (format == OutputFormat::Csv) {
    write_file(path, rows_to_csv(rows, truncation));
    return;
  }
  nlohmann::json j = {{"rows", rows_to_json(rows)}};
  if (!truncation.empty()) j["truncated"] = truncation;
  write_file(path, j.dump(2) + "\n");
}

void write_solve_artifacts(const SolveResult& r, const std::string& dir, OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  const std::string truncation =
      r.complete ? std::string() : "at step " + std::to_string(r.failed_step) + ": " + r.failure;
  const char* name = format == OutputFormat::Csv ? "diagnostics.csv" : "diagnostics.json";
  write_rows(r.rows, format, (base / name).string(), truncation);
  write_file((base / "virial_terms.csv").string(), virial_terms_csv(r.virial_rows));
  write_file((base / "apriori.csv").string(), apriori_csv(r.apriori, r.J));
  write_file((base / "summary.json").string(), summary_json(r).dump(2) + "\n");
}

}  // namespace hartree
