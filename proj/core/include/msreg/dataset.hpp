#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "msreg/matrix.hpp"

namespace msreg {

struct Dataset {
  std::string id;
  std::vector<std::string> feature_names;
  std::string target_name;
  Matrix features;  // n_rows x n_features
  Vector target;    // n_rows

  std::size_t n_rows() const { return features.rows(); }
  std::size_t n_features() const { return features.cols(); }
};

// Loads a headered CSV. Column selectors are header names; a selector made
// entirely of digits is treated as a zero-based column position instead.
// An empty feature list selects every column except the target. Only the
// selected columns are parsed as numbers, so files may carry non-numeric
// columns as long as they are not selected.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 const std::vector<std::string>& feature_columns = {});

struct DatasetSpec {
  std::string id;
  std::filesystem::path path;  // absolute once loaded from a registry
  std::string target;
  std::vector<std::string> features;  // empty: all non-target columns
  std::string notes;
};

// Registry file: JSON {"datasets": [{id, path, target, features?, notes?}]}.
// Relative paths are resolved against the registry file's directory.
std::vector<DatasetSpec> load_registry(const std::filesystem::path& path);

Dataset load_dataset(const DatasetSpec& spec);

}  // namespace msreg
