#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hartree/driver.hpp"

namespace hartree {

inline constexpr const char* kCsvHeader =
    "step,t,mass,energy,mass_lhs,mass_rhs,mass_res,energy_lhs,energy_rhs,energy_res,"
    "virial_lhs,virial_rhs,virial_res,J_cum,h1_norm,picard_iters,contraction_est";

std::string csv_line(const DiagnosticsRow& row);
/// Header, one line per row, and a `# truncated ...` marker line when
/// `truncation` is non-empty.
std::string rows_to_csv(const std::vector<DiagnosticsRow>& rows, const std::string& truncation = {});
/// Inverse of rows_to_csv; `#` lines are skipped. Throws IoError on malformed input.
std::vector<DiagnosticsRow> rows_from_csv(const std::string& text);

nlohmann::json rows_to_json(const std::vector<DiagnosticsRow>& rows);
std::string virial_terms_csv(const std::vector<VirialRow>& rows);
std::string apriori_csv(const AprioriReport& report, const std::vector<double>& J);
nlohmann::json summary_json(const SolveResult& r);

std::string read_file(const std::string& path);
/// Writes the whole file or throws IoError naming the path.
void write_file(const std::string& path, const std::string& contents);
void write_rows(const std::vector<DiagnosticsRow>& rows, OutputFormat format, const std::string& path,
                const std::string& truncation = {});

/// Writes diagnostics, virial_terms.csv, apriori.csv and summary.json into `dir`.
void write_solve_artifacts(const SolveResult& r, const std::string& dir, OutputFormat format);

}  // namespace hartree
