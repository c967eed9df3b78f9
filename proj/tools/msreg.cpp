// msreg: cluster-then-regress experiment runner.
//
// Subcommands:
//   scan-kempty   smallest k with an empty cluster, per dataset
//   run           cross-validated comparison of PM_1 vs both ensembles
//   profile       MAE-vs-j curve for one or more dataset/regressor pairs
//   report        re-render a saved report CSV as an aligned table
//
// Every experiment needs an explicit seed (flag or config file); there is no
// wall-clock fallback, so identical invocations produce identical bytes.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "msreg/dataset.hpp"
#include "msreg/evaluation.hpp"
#include "msreg/parallel.hpp"
#include "msreg/regressor.hpp"
#include "msreg/report.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string registry = "data/registry.json";
  std::vector<std::string> datasets;    // empty: every registry entry
  std::vector<std::string> regressors;  // empty: ols, stepwise, forest
  std::optional<std::uint64_t> seed;    // mandatory; no hidden entropy
  int outer_folds = 5;
  int inner_folds = 5;
  int k_cap = 25;
  int restarts = 200;
  int max_iterations = 300;
  int profile_cap = 25;
  std::string normalization = "train";  // "train" | "whole"
  std::string out_dir = "out";
  int workers = 0;  // 0: one per hardware thread
};

RunConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  if (!doc.is_object())
    throw std::runtime_error("config " + path.string() + ": expected a JSON object");

  static const std::set<std::string> known = {
      "registry",   "datasets",       "regressors",  "seed",
      "outer_folds", "inner_folds",   "k_cap",       "restarts",
      "max_iterations", "profile_cap", "normalization", "out",
      "workers"};
  for (const auto& item : doc.items())
    if (!known.count(item.key()))
      throw std::runtime_error("config " + path.string() + ": unknown key '" +
                               item.key() + "'");

  RunConfig c;
  c.registry = doc.value("registry", c.registry);
  if (doc.contains("datasets"))
    c.datasets = doc.at("datasets").get<std::vector<std::string>>();
  if (doc.contains("regressors"))
    c.regressors = doc.at("regressors").get<std::vector<std::string>>();
  if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
  c.outer_folds = doc.value("outer_folds", c.outer_folds);
  c.inner_folds = doc.value("inner_folds", c.inner_folds);
  c.k_cap = doc.value("k_cap", c.k_cap);
  c.restarts = doc.value("restarts", c.restarts);
  c.max_iterations = doc.value("max_iterations", c.max_iterations);
  c.profile_cap = doc.value("profile_cap", c.profile_cap);
  c.normalization = doc.value("normalization", c.normalization);
  c.out_dir = doc.value("out", c.out_dir);
  c.workers = doc.value("workers", c.workers);

  // paths in a config file are relative to the file, not to the cwd
  fs::path reg(c.registry);
  if (reg.is_relative()) c.registry = (path.parent_path() / reg).string();
  return c;
}

// flag values + presence markers; only options the user actually passed
// override the config file
struct Flags {
  std::string config_path;
  std::string registry;
  std::vector<std::string> datasets;
  std::vector<std::string> regressors;
  std::uint64_t seed = 0;
  int k_cap = 0;
  std::string normalization;
  std::string out_dir;
  int restarts = 0;
  int outer_folds = 0;
  int inner_folds = 0;
  int profile_cap = 0;
  int workers = 0;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path,
                  "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  cmd->add_option("--registry", f.registry, "dataset registry JSON");
  cmd->add_option("--dataset", f.datasets, "dataset id (repeatable; default: all)");
  cmd->add_option("--regressor", f.regressors,
                  "base regressor (repeatable; default: all)")
      ->check(CLI::IsMember({"ols", "stepwise", "forest"}));
  cmd->add_option("--seed", f.seed, "master seed (required here or in the config)");
  cmd->add_option("--k-cap", f.k_cap, "largest cluster count to consider")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--normalization", f.normalization,
                  "fit feature scaling on: train folds or the whole dataset")
      ->check(CLI::IsMember({"train", "whole"}));
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--restarts", f.restarts, "k-means restarts per scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--outer-folds", f.outer_folds, "outer CV folds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-folds", f.inner_folds, "inner CV folds (methodology II)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", f.workers, "worker threads (0 = auto)");
}

RunConfig resolve_config(const CLI::App* cmd, const Flags& f) {
  RunConfig c;
  if (cmd->count("--config")) c = load_config_file(f.config_path);
  if (cmd->count("--registry")) c.registry = f.registry;
  if (cmd->count("--dataset")) c.datasets = f.datasets;
  if (cmd->count("--regressor")) c.regressors = f.regressors;
  if (cmd->count("--seed")) c.seed = f.seed;
  if (cmd->count("--k-cap")) c.k_cap = f.k_cap;
  if (cmd->count("--normalization")) c.normalization = f.normalization;
  if (cmd->count("--out")) c.out_dir = f.out_dir;
  if (cmd->count("--restarts")) c.restarts = f.restarts;
  if (cmd->count("--outer-folds")) c.outer_folds = f.outer_folds;
  if (cmd->count("--inner-folds")) c.inner_folds = f.inner_folds;
  // only the profile subcommand registers this one
  const CLI::Option* cap_opt = cmd->get_option_no_throw("--profile-cap");
  if (cap_opt && cap_opt->count()) c.profile_cap = f.profile_cap;
  if (cmd->count("--workers")) c.workers = f.workers;

  if (!c.seed)
    throw std::runtime_error(
        "a seed is required: pass --seed or put \"seed\" in the config file");
  if (c.normalization != "train" && c.normalization != "whole")
    throw std::runtime_error("normalization must be 'train' or 'whole', got '" +
                             c.normalization + "'");
  if (c.regressors.empty()) c.regressors = {"ols", "stepwise", "forest"};
  return c;
}

msreg::ExperimentConfig to_experiment_config(const RunConfig& c) {
  msreg::ExperimentConfig ec;
  ec.policy.n_restarts = c.restarts;
  ec.policy.max_iterations = c.max_iterations;
  ec.outer_folds = c.outer_folds;
  ec.inner_folds = c.inner_folds;
  ec.k_cap = c.k_cap;
  ec.seed = *c.seed;
  ec.normalize_whole = (c.normalization == "whole");
  return ec;
}

struct DatasetSel {
  std::string id;
  std::optional<msreg::DatasetSpec> spec;  // nullopt: not in the registry
};

// Selected datasets in registry order; requested ids the registry does not
// know are kept (in request order, at the end) so they can fail visibly
// instead of being silently dropped.
std::vector<DatasetSel> select_datasets(const RunConfig& c) {
  const std::vector<msreg::DatasetSpec> registry = msreg::load_registry(c.registry);
  std::vector<std::string> wanted = c.datasets;
  // dedup, first occurrence wins
  std::set<std::string> seen;
  std::vector<std::string> unique;
  for (const std::string& id : wanted)
    if (seen.insert(id).second) unique.push_back(id);

  std::vector<DatasetSel> out;
  if (unique.empty()) {
    for (const msreg::DatasetSpec& spec : registry) out.push_back({spec.id, spec});
    if (out.empty()) throw std::runtime_error("registry lists no datasets");
    return out;
  }
  std::set<std::string> matched;
  for (const msreg::DatasetSpec& spec : registry)
    if (seen.count(spec.id)) {
      out.push_back({spec.id, spec});
      matched.insert(spec.id);
    }
  for (const std::string& id : unique)
    if (!matched.count(id)) out.push_back({id, std::nullopt});
  return out;
}

std::string sanitize_for_filename(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
               ? c
               : '_';
  return out;
}

void ensure_out_dir(const RunConfig& c) { fs::create_directories(c.out_dir); }

int cmd_scan_kempty(const RunConfig& c) {
  const msreg::ExperimentConfig ec = to_experiment_config(c);
  const std::vector<DatasetSel> selected = select_datasets(c);

  std::vector<msreg::KEmptyRow> rows(selected.size());
  msreg::parallel_for(
      selected.size(),
      [&](std::size_t i) {
        rows[i].dataset_id = selected[i].id;
        try {
          if (!selected[i].spec)
            throw std::runtime_error("dataset '" + selected[i].id +
                                     "' is not in the registry");
          const msreg::Dataset ds = msreg::load_dataset(*selected[i].spec);
          rows[i].k_empty = msreg::full_data_k_empty(ds, ec);
        } catch (const std::exception& e) {
          rows[i].failed = true;
          rows[i].error = e.what();
        }
      },
      static_cast<unsigned>(c.workers));

  std::cout << msreg::render_kempty_table(rows);
  ensure_out_dir(c);
  const fs::path csv = fs::path(c.out_dir) / "kempty.csv";
  msreg::write_text_file(csv, msreg::render_kempty_csv(rows));
  std::cerr << "wrote " << csv.string() << "\n";

  for (const msreg::KEmptyRow& row : rows)
    if (row.failed) return 1;
  return 0;
}

struct Task {
  std::string dataset_id;
  std::string regressor;
  const msreg::DatasetSpec* spec = nullptr;  // null: unknown dataset id
};

std::vector<Task> make_tasks(const std::vector<DatasetSel>& selected,
                             const std::vector<std::string>& regressors) {
  std::vector<Task> tasks;
  for (const DatasetSel& sel : selected)
    for (const std::string& reg : regressors)
      tasks.push_back({sel.id, reg, sel.spec ? &*sel.spec : nullptr});
  return tasks;
}

int cmd_run(const RunConfig& c) {
  const msreg::ExperimentConfig ec = to_experiment_config(c);
  const std::vector<DatasetSel> selected = select_datasets(c);
  const std::vector<Task> tasks = make_tasks(selected, c.regressors);

  std::vector<msreg::ReportRow> rows(tasks.size());
  msreg::parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const Task& task = tasks[i];
        rows[i].report.dataset_id = task.dataset_id;
        rows[i].report.regressor = task.regressor;
        try {
          if (!task.spec)
            throw std::runtime_error("dataset '" + task.dataset_id +
                                     "' is not in the registry");
          const msreg::Dataset ds = msreg::load_dataset(*task.spec);
          const msreg::RegressorSpec spec = msreg::RegressorSpec::parse(task.regressor);
          rows[i].report = msreg::run_experiment(ds, spec, ec);
        } catch (const std::exception& e) {
          rows[i].failed = true;
          rows[i].error = e.what();
        }
      },
      static_cast<unsigned>(c.workers));

  const std::string table = msreg::render_report_table(rows);
  std::cout << table;
  ensure_out_dir(c);
  const fs::path csv = fs::path(c.out_dir) / "report.csv";
  const fs::path txt = fs::path(c.out_dir) / "report.txt";
  msreg::write_text_file(csv, msreg::render_report_csv(rows));
  msreg::write_text_file(txt, table);
  std::cerr << "wrote " << csv.string() << " and " << txt.string() << "\n";

  for (const msreg::ReportRow& row : rows)
    if (row.failed) return 1;
  return 0;
}

int cmd_profile(const RunConfig& c) {
  const msreg::ExperimentConfig ec = to_experiment_config(c);
  const std::vector<DatasetSel> selected = select_datasets(c);
  const std::vector<Task> tasks = make_tasks(selected, c.regressors);
  ensure_out_dir(c);

  struct Outcome {
    std::string message;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(tasks.size());

  msreg::parallel_for(
      tasks.size(),
      [&](std::size_t i) {
        const Task& task = tasks[i];
        const std::string stem = "profile-" + sanitize_for_filename(task.dataset_id) +
                                 "-" + sanitize_for_filename(task.regressor);
        try {
          if (!task.spec)
            throw std::runtime_error("dataset '" + task.dataset_id +
                                     "' is not in the registry");
          const msreg::Dataset ds = msreg::load_dataset(*task.spec);
          const msreg::RegressorSpec spec = msreg::RegressorSpec::parse(task.regressor);
          const msreg::ErrorProfile profile =
              msreg::build_error_profile(ds, spec, ec, c.profile_cap);
          const fs::path csv = fs::path(c.out_dir) / (stem + ".csv");
          const fs::path svg = fs::path(c.out_dir) / (stem + ".svg");
          msreg::write_text_file(csv, msreg::render_profile_csv(profile));
          msreg::write_text_file(svg, msreg::render_profile_svg(profile));
          outcomes[i].message = "wrote " + csv.string() + " and " + svg.string() +
                                " (j = 1.." +
                                std::to_string(profile.mae_by_j.size()) +
                                ", highlighted j = " +
                                std::to_string(profile.highlighted_j) + ")";
        } catch (const std::exception& e) {
          outcomes[i].failed = true;
          outcomes[i].message = task.dataset_id + " x " + task.regressor +
                                " failed: " + e.what();
        }
      },
      static_cast<unsigned>(c.workers));

  bool any_failed = false;
  for (const Outcome& o : outcomes) {
    (o.failed ? std::cerr : std::cout) << o.message << "\n";
    any_failed = any_failed || o.failed;
  }
  return any_failed ? 1 : 0;
}

int cmd_report(const std::string& csv_path, const std::string& out_dir) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open report csv: " + csv_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const std::vector<msreg::ReportRow> rows = msreg::parse_report_csv(text);
  const std::string table = msreg::render_report_table(rows);
  std::cout << table;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const fs::path txt = fs::path(out_dir) / "report.txt";
    msreg::write_text_file(txt, table);
    std::cerr << "wrote " << txt.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cluster-then-regress experiments: per-cluster models at every scale,\n"
      "prefix-averaged ensembles, and cross-validated comparisons"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* scan = app.add_subcommand(
      "scan-kempty", "find the smallest k that produces an empty cluster");
  add_common_options(scan, flags);

  CLI::App* run = app.add_subcommand(
      "run", "cross-validated MAE comparison (PM_1 vs both ensemble pickers)");
  add_common_options(run, flags);

  CLI::App* profile =
      app.add_subcommand("profile", "MAE as a function of ensemble size j");
  add_common_options(profile, flags);
  profile->add_option("--profile-cap", flags.profile_cap,
                      "largest j in the profile")
      ->check(CLI::PositiveNumber);

  std::string report_csv;
  std::string report_out;
  CLI::App* report =
      app.add_subcommand("report", "re-render a report CSV as an aligned table");
  report->add_option("csv", report_csv, "report.csv produced by 'run'")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "also write report.txt here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return cmd_report(report_csv, report_out);
    const CLI::App* cmd = scan->parsed() ? scan : run->parsed() ? run : profile;
    const RunConfig config = resolve_config(cmd, flags);
    if (scan->parsed()) return cmd_scan_kempty(config);
    if (run->parsed()) return cmd_run(config);
    return cmd_profile(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
