#include "msreg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace msreg {

namespace {

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_p_csv(const TTestResult& test) {
  if (test.degenerate) return "--";
  return fmt("%.6g", test.p);
}

std::string format_p_table(const TTestResult& test) {
  if (test.degenerate) return "--";
  if (test.p < 0.001) return "<< 0.001";
  return fmt("%.4f", test.p);
}

std::string render_report_csv(std::span<const ReportRow> rows) {
  std::string out =
      "dataset,regressor,k_empty,mae_pm1,mae_heuristic,p_heuristic,mae_cvk,"
      "p_cvk,error\n";
  for (const ReportRow& row : rows) {
    out += csv_escape(row.report.dataset_id) + ',' + row.report.regressor + ',';
    if (row.failed) {
      out += ",,,,,," + csv_escape(row.error) + '\n';
      continue;
    }
    out += std::to_string(row.report.k_empty_full) + ',';
    out += fmt("%.6f", row.report.mae_pm1) + ',';
    out += fmt("%.6f", row.report.mae_heuristic) + ',';
    out += format_p_csv(row.report.p_heuristic) + ',';
    out += fmt("%.6f", row.report.mae_cvk) + ',';
    out += format_p_csv(row.report.p_cvk) + ",\n";
  }
  return out;
}

std::string render_report_table(std::span<const ReportRow> rows) {
  const std::vector<std::string> headers = {"dataset",       "regressor", "k_empty",
                                            "mae_pm1",       "mae_heuristic",
                                            "p_heuristic",   "mae_cvk",   "p_cvk"};
  std::vector<std::vector<std::string>> cells;
  for (const ReportRow& row : rows) {
    std::vector<std::string> line;
    line.push_back(row.report.dataset_id);
    line.push_back(row.report.regressor);
    if (row.failed) {
      line.push_back("error: " + row.error);
      while (line.size() < headers.size()) line.emplace_back("");
    } else {
      line.push_back(std::to_string(row.report.k_empty_full));
      line.push_back(fmt("%.4f", row.report.mae_pm1));
      line.push_back(fmt("%.4f", row.report.mae_heuristic));
      line.push_back(format_p_table(row.report.p_heuristic));
      line.push_back(fmt("%.4f", row.report.mae_cvk));
      line.push_back(format_p_table(row.report.p_cvk));
    }
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> widths;
  for (const std::string& h : headers) widths.push_back(h.size());
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c)
      widths[c] = std::max(widths[c], line[c].size());

  std::string out;
  for (std::size_t c = 0; c < headers.size(); ++c)
    out += pad(headers[c], widths[c]) + (c + 1 < headers.size() ? "  " : "");
  out += '\n';
  for (std::size_t c = 0; c < headers.size(); ++c)
    out += std::string(widths[c], '-') + (c + 1 < headers.size() ? "  " : "");
  out += '\n';
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c)
      out += pad(line[c], widths[c]) + (c + 1 < line.size() ? "  " : "");
    out += '\n';
  }
  return out;
}

namespace {

// Splits one CSV record, honoring the quoting render_report_csv emits.
std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

double parse_double_cell(const std::string& cell, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("report csv: bad ") + what + " value '" +
                             cell + "'");
  }
}

TTestResult parse_p_cell(const std::string& cell, const char* what) {
  TTestResult t;
  if (cell == "--") {
    t.degenerate = true;
    t.p = 1.0;
  } else {
    t.p = parse_double_cell(cell, what);
  }
  return t;
}

}  // namespace

std::vector<ReportRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("report csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line !=
      "dataset,regressor,k_empty,mae_pm1,mae_heuristic,p_heuristic,mae_cvk,"
      "p_cvk,error")
    throw std::runtime_error("report csv: unexpected header '" + line + "'");

  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_record(line);
    if (cells.size() != 9)
      throw std::runtime_error("report csv: row with " +
                               std::to_string(cells.size()) + " cells, expected 9");
    ReportRow row;
    row.report.dataset_id = cells[0];
    row.report.regressor = cells[1];
    if (!cells[8].empty()) {
      row.failed = true;
      row.error = cells[8];
      rows.push_back(std::move(row));
      continue;
    }
    row.report.k_empty_full = static_cast<int>(parse_double_cell(cells[2], "k_empty"));
    row.report.mae_pm1 = parse_double_cell(cells[3], "mae_pm1");
    row.report.mae_heuristic = parse_double_cell(cells[4], "mae_heuristic");
    row.report.p_heuristic = parse_p_cell(cells[5], "p_heuristic");
    row.report.mae_cvk = parse_double_cell(cells[6], "mae_cvk");
    row.report.p_cvk = parse_p_cell(cells[7], "p_cvk");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_kempty_csv(std::span<const KEmptyRow> rows) {
  std::string out = "dataset,k_empty,error\n";
  for (const KEmptyRow& row : rows) {
    out += csv_escape(row.dataset_id) + ',';
    if (row.failed)
      out += ',' + csv_escape(row.error) + '\n';
    else
      out += std::to_string(row.k_empty) + ",\n";
  }
  return out;
}

std::string render_kempty_table(std::span<const KEmptyRow> rows) {
  std::size_t width = std::string("dataset").size();
  for (const KEmptyRow& row : rows) width = std::max(width, row.dataset_id.size());
  std::string out = pad("dataset", width) + "  k_empty\n";
  out += std::string(width, '-') + "  -------\n";
  for (const KEmptyRow& row : rows) {
    out += pad(row.dataset_id, width) + "  ";
    out += row.failed ? "error: " + row.error : std::to_string(row.k_empty);
    out += '\n';
  }
  return out;
}

std::string render_profile_csv(const ErrorProfile& profile) {
  std::string out = "j,mae,highlighted\n";
  for (std::size_t j = 0; j < profile.mae_by_j.size(); ++j) {
    out += std::to_string(j + 1) + ',' + fmt("%.6f", profile.mae_by_j[j]) + ',';
    out += (static_cast<int>(j + 1) == profile.highlighted_j ? "1" : "0");
    out += '\n';
  }
  return out;
}

std::string render_profile_svg(const ErrorProfile& profile) {
  const int width = 720, height = 420;
  const double left = 56, right = 16, top = 44, bottom = 46;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t n = profile.mae_by_j.size();

  double y_max = 0.0;
  for (double v : profile.mae_by_j) y_max = std::max(y_max, v);
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  svg << "<style>.bar{fill:#4878a8;}.bar.highlighted{fill:#c0392b;}"
      << "text{font-family:sans-serif;font-size:12px;fill:#222;}"
      << ".title{font-size:14px;}.axis{stroke:#222;stroke-width:1;}"
      << ".grid{stroke:#ccc;stroke-width:0.5;}</style>\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text class=\"title\" x=\"" << left << "\" y=\"22\">error profile: "
      << profile.dataset_id << " / " << profile.regressor
      << " (highlighted bar: K_empty/2 heuristic)</text>\n";

  // horizontal grid + y labels
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double y = top + plot_h * (1.0 - frac);
    svg << "<line class=\"grid\" x1=\"" << fmt("%.2f", left) << "\" y1=\""
        << fmt("%.2f", y) << "\" x2=\"" << fmt("%.2f", left + plot_w) << "\" y2=\""
        << fmt("%.2f", y) << "\"/>\n";
    svg << "<text x=\"4\" y=\"" << fmt("%.2f", y + 4) << "\">"
        << fmt("%.4g", y_max * frac) << "</text>\n";
  }

  const double slot = plot_w / static_cast<double>(n);
  const double bar_w = slot * 0.8;
  for (std::size_t j = 0; j < n; ++j) {
    const double h = plot_h * profile.mae_by_j[j] / y_max;
    const double x = left + slot * static_cast<double>(j) + slot * 0.1;
    const double y = top + plot_h - h;
    const bool hot = static_cast<int>(j + 1) == profile.highlighted_j;
    svg << "<rect class=\"bar" << (hot ? " highlighted" : "") << "\" x=\""
        << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y) << "\" width=\""
        << fmt("%.2f", bar_w) << "\" height=\"" << fmt("%.2f", h) << "\"/>\n";
    svg << "<text x=\"" << fmt("%.2f", x + bar_w / 2 - 4) << "\" y=\""
        << fmt("%.2f", static_cast<double>(height) - 28) << "\">" << (j + 1)
        << "</text>\n";
  }

  svg << "<line class=\"axis\" x1=\"" << fmt("%.2f", left) << "\" y1=\""
      << fmt("%.2f", top + plot_h) << "\" x2=\"" << fmt("%.2f", left + plot_w)
      << "\" y2=\"" << fmt("%.2f", top + plot_h) << "\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << fmt("%.2f", left) << "\" y1=\""
      << fmt("%.2f", top) << "\" x2=\"" << fmt("%.2f", left) << "\" y2=\""
      << fmt("%.2f", top + plot_h) << "\"/>\n";
  svg << "<text x=\"" << fmt("%.2f", left + plot_w / 2 - 110) << "\" y=\""
      << height - 8 << "\">number of prediction models averaged (j)</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace msreg
