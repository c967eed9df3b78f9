#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "msreg/evaluation.hpp"

namespace msreg {

// One row of the summary report: either a finished experiment or the error
// that stopped it (partial success is allowed; failures travel in-band).
struct ReportRow {
  ExperimentReport report;
  std::string error;  // empty on success
  bool failed = false;
};

struct KEmptyRow {
  std::string dataset_id;
  int k_empty = 0;
  std::string error;
  bool failed = false;
};

// "--" for the degenerate all-zero-differences case, otherwise a number
std::string format_p_csv(const TTestResult& test);
// table flavor: very small p-values render "<< 0.001" as a magnitude claim
std::string format_p_table(const TTestResult& test);

// columns: dataset,regressor,k_empty,mae_pm1,mae_heuristic,p_heuristic,
//          mae_cvk,p_cvk,error
std::string render_report_csv(std::span<const ReportRow> rows);
std::string render_report_table(std::span<const ReportRow> rows);

// Inverse of render_report_csv, for re-rendering a saved CSV as a table.
// Only the columns the table shows survive the round trip (t statistics and
// per-fold details are not part of the CSV).
std::vector<ReportRow> parse_report_csv(const std::string& text);

std::string render_kempty_csv(std::span<const KEmptyRow> rows);
std::string render_kempty_table(std::span<const KEmptyRow> rows);

// columns: j,mae,highlighted
std::string render_profile_csv(const ErrorProfile& profile);
// self-contained bar chart; the Methodology-I bar carries the highlighted class
std::string render_profile_svg(const ErrorProfile& profile);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace msreg
