#include "msreg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace msreg {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  // drop a UTF-8 byte order mark if present
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF)
    text.erase(0, 3);
  return text;
}

std::string trim_cell(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  // tolerate quoted cells ("0", "crim"); quotes carry no meaning here
  if (e - b >= 2 && s[b] == '"' && s[e - 1] == '"') {
    ++b;
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim_cell(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::string& selector,
                           const std::filesystem::path& path) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == selector) return i;
  if (all_digits(selector)) {
    std::size_t index = 0;
    std::from_chars(selector.data(), selector.data() + selector.size(), index);
    if (index < header.size()) return index;
  }
  throw std::runtime_error("unknown column \"" + selector + "\" in " + path.string());
}

double parse_cell(const std::string& cell, std::size_t line_no,
                  const std::string& column, const std::filesystem::path& path) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("non-numeric cell at row " + std::to_string(line_no) +
                             ", column \"" + column + "\" in " + path.string());
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 const std::vector<std::string>& feature_columns) {
  const std::string text = read_file(path);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line(text.data() + start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  if (lines.empty()) throw std::runtime_error("empty file: " + path.string());

  const std::vector<std::string> header = split_line(lines[0]);
  const std::size_t target_index = resolve_column(header, target_column, path);

  std::vector<std::size_t> feature_indices;
  if (feature_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (i != target_index) feature_indices.push_back(i);
  } else {
    for (const std::string& sel : feature_columns)
      feature_indices.push_back(resolve_column(header, sel, path));
  }

  const std::size_t n_rows = lines.size() - 1;
  if (n_rows == 0) throw std::runtime_error("no data rows in " + path.string());

  Dataset ds;
  ds.target_name = header[target_index];
  for (std::size_t i : feature_indices) ds.feature_names.push_back(header[i]);
  ds.features = Matrix(n_rows, feature_indices.size());
  ds.target.resize(n_rows);

  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::vector<std::string> cells = split_line(lines[r + 1]);
    if (cells.size() != header.size())
      throw std::runtime_error("row " + std::to_string(r + 2) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()) + " in " + path.string());
    for (std::size_t f = 0; f < feature_indices.size(); ++f)
      ds.features(r, f) =
          parse_cell(cells[feature_indices[f]], r + 2, header[feature_indices[f]], path);
    ds.target[r] = parse_cell(cells[target_index], r + 2, ds.target_name, path);
  }
  return ds;
}

std::vector<DatasetSpec> load_registry(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("registry " + path.string() + ": " + e.what());
  }
  if (!doc.contains("datasets") || !doc["datasets"].is_array())
    throw std::runtime_error("registry " + path.string() +
                             ": expected a top-level \"datasets\" array");

  const std::filesystem::path base = path.parent_path();
  std::vector<DatasetSpec> specs;
  for (const auto& entry : doc["datasets"]) {
    DatasetSpec spec;
    spec.id = entry.at("id").get<std::string>();
    std::filesystem::path p = entry.at("path").get<std::string>();
    spec.path = p.is_absolute() ? p : base / p;
    spec.target = entry.at("target").get<std::string>();
    if (entry.contains("features"))
      spec.features = entry["features"].get<std::vector<std::string>>();
    if (entry.contains("notes")) spec.notes = entry["notes"].get<std::string>();
    specs.push_back(std::move(spec));
  }
  return specs;
}

Dataset load_dataset(const DatasetSpec& spec) {
  Dataset ds = load_csv(spec.path, spec.target, spec.features);
  ds.id = spec.id;
  return ds;
}

}  // namespace msreg
