// End-to-end tests driving the installed CLI as a subprocess. The fixture
// dataset is generated deterministically, so output files can be compared
// byte for byte against committed golden copies. Set MSREG_UPDATE_GOLDEN=1
// to regenerate the goldens after an intentional format change.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "msreg/rng.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path out_file = scratch / "stdout.txt";
  const fs::path err_file = scratch / "stderr.txt";
  std::string cmd = std::string("\"") + MSREG_CLI_PATH + "\" " + args + " > \"" +
                    out_file.string() + "\" 2> \"" + err_file.string() + "\"";
  int status = std::system(cmd.c_str());
  CliResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.out = testutil::read_file(out_file);
  result.err = testutil::read_file(err_file);
  return result;
}

// three linear segments over two features; enough rows for 3-fold work
std::string make_fixture_csv() {
  msreg::Rng rng(20240506);
  std::string csv = "x1,x2,y\n";
  char buf[96];
  const double centers[3][2] = {{0.0, 0.0}, {5.0, 0.0}, {0.0, 5.0}};
  for (int blob = 0; blob < 3; ++blob) {
    for (int i = 0; i < 30; ++i) {
      double x1 = centers[blob][0] + 0.6 * rng.gaussian();
      double x2 = centers[blob][1] + 0.6 * rng.gaussian();
      double y = 0.0;
      if (blob == 0) y = 1.0 + 2.0 * x1 - x2;
      if (blob == 1) y = -4.0 + x1 + 3.0 * x2;
      if (blob == 2) y = 9.0 - 2.0 * x1 + x2;
      y += 0.15 * rng.gaussian();
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x1, x2, y);
      csv += buf;
    }
  }
  return csv;
}

struct Fixture {
  fs::path dir;
  fs::path registry;
  std::string common;  // flags shared by every invocation
};

Fixture make_fixture() {
  Fixture f;
  f.dir = testutil::fresh_temp_dir("cli");
  testutil::write_file(f.dir / "synth.csv", make_fixture_csv());
  testutil::write_file(f.dir / "registry.json",
                       R"({"datasets": [{"id": "synth", "path": "synth.csv", "target": "y"}]})");
  f.registry = f.dir / "registry.json";
  f.common = "--registry \"" + f.registry.string() +
             "\" --seed 29 --k-cap 5 --restarts 6 --outer-folds 3 --inner-folds 3";
  return f;
}

void check_against_golden(const std::string& produced, const std::string& name) {
  const fs::path golden = fs::path(MSREG_GOLDEN_DIR) / name;
  if (std::getenv("MSREG_UPDATE_GOLDEN")) {
    testutil::write_file(golden, produced);
    return;
  }
  INFO("golden file: ", golden.string());
  REQUIRE(fs::exists(golden));
  CHECK(produced == testutil::read_file(golden));
}

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size()))
    ++n;
  return n;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

TEST_CASE("run emits a deterministic report, byte for byte") {
  Fixture f = make_fixture();
  fs::path out1 = f.dir / "out1";
  fs::path out2 = f.dir / "out2";

  CliResult r1 = run_cli("run " + f.common + " --regressor ols --out \"" +
                             out1.string() + "\"",
                         f.dir);
  REQUIRE_MESSAGE(r1.exit_code == 0, r1.err);
  REQUIRE(fs::exists(out1 / "report.csv"));
  REQUIRE(fs::exists(out1 / "report.txt"));

  CliResult r2 = run_cli("run " + f.common + " --regressor ols --out \"" +
                             out2.string() + "\"",
                         f.dir);
  REQUIRE(r2.exit_code == 0);
  CHECK(testutil::read_file(out1 / "report.csv") ==
        testutil::read_file(out2 / "report.csv"));
  CHECK(r1.out == r2.out);

  const std::string csv = testutil::read_file(out1 / "report.csv");
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "dataset,regressor,k_empty,mae_pm1,mae_heuristic,p_heuristic,mae_cvk,"
        "p_cvk,error");
  std::vector<std::string> cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 9);
  CHECK(cells[0] == "synth");
  CHECK(cells[1] == "ols");
  CHECK(std::stoi(cells[2]) >= 2);
  CHECK(std::stod(cells[3]) > 0.0);
  CHECK(cells[8].empty());

  // the table comes back on stdout too
  CHECK(r1.out.find("dataset") != std::string::npos);
  CHECK(r1.out.find("synth") != std::string::npos);

  check_against_golden(csv, "report.csv");
}

TEST_CASE("scan-kempty prints and writes the per-dataset scan") {
  Fixture f = make_fixture();
  fs::path out = f.dir / "scan";
  CliResult r = run_cli("scan-kempty " + f.common + " --out \"" + out.string() + "\"",
                        f.dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const std::string csv = testutil::read_file(out / "kempty.csv");
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "dataset,k_empty,error");
  CHECK(lines[1].rfind("synth,", 0) == 0);
  CHECK(r.out.find("synth") != std::string::npos);
  check_against_golden(csv, "kempty.csv");
}

TEST_CASE("profile writes the curve and the chart") {
  Fixture f = make_fixture();
  fs::path out = f.dir / "prof";
  CliResult r = run_cli("profile " + f.common + " --regressor ols --out \"" +
                            out.string() + "\"",
                        f.dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  const fs::path csv_path = out / "profile-synth-ols.csv";
  const fs::path svg_path = out / "profile-synth-ols.svg";
  REQUIRE(fs::exists(csv_path));
  REQUIRE(fs::exists(svg_path));

  const std::string csv = testutil::read_file(csv_path);
  std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "j,mae,highlighted");
  const std::size_t n_rows = lines.size() - 1;

  const std::string svg = testutil::read_file(svg_path);
  CHECK(count_occurrences(svg, "class=\"bar\"") +
            count_occurrences(svg, "class=\"bar highlighted\"") ==
        static_cast<int>(n_rows));
  CHECK(count_occurrences(svg, "class=\"bar highlighted\"") == 1);

  // the j = 1 profile row repeats the report's PM_1 error verbatim
  fs::path run_out = f.dir / "run_for_profile";
  CliResult rr = run_cli("run " + f.common + " --regressor ols --out \"" +
                             run_out.string() + "\"",
                         f.dir);
  REQUIRE(rr.exit_code == 0);
  std::vector<std::string> report_lines =
      split_lines(testutil::read_file(run_out / "report.csv"));
  std::string mae_pm1 = split_csv(report_lines[1])[3];
  std::string profile_j1 = split_csv(lines[1])[1];
  CHECK(profile_j1 == mae_pm1);

  check_against_golden(csv, "profile-synth-ols.csv");
  check_against_golden(svg, "profile-synth-ols.svg");
}

TEST_CASE("report re-renders a saved CSV to the identical table") {
  Fixture f = make_fixture();
  fs::path out = f.dir / "rr";
  CliResult r = run_cli("run " + f.common + " --regressor ols --out \"" +
                            out.string() + "\"",
                        f.dir);
  REQUIRE(r.exit_code == 0);

  fs::path re_out = f.dir / "rr2";
  CliResult rr = run_cli("report \"" + (out / "report.csv").string() +
                             "\" --out \"" + re_out.string() + "\"",
                         f.dir);
  REQUIRE_MESSAGE(rr.exit_code == 0, rr.err);
  CHECK(testutil::read_file(re_out / "report.txt") ==
        testutil::read_file(out / "report.txt"));
  CHECK(rr.out == testutil::read_file(out / "report.txt"));
}

TEST_CASE("unknown datasets fail their row but spare the rest") {
  Fixture f = make_fixture();
  fs::path out = f.dir / "partial";
  CliResult r = run_cli("run " + f.common +
                            " --dataset synth --dataset nope --regressor ols --out \"" +
                            out.string() + "\"",
                        f.dir);
  CHECK(r.exit_code == 1);  // a task errored
  std::vector<std::string> lines = split_lines(testutil::read_file(out / "report.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("synth,ols,", 0) == 0);
  CHECK(split_csv(lines[1])[8].empty());
  CHECK(lines[2].rfind("nope,ols,", 0) == 0);
  CHECK(lines[2].find("not in the registry") != std::string::npos);
}

TEST_CASE("a seed is mandatory") {
  Fixture f = make_fixture();
  CliResult r = run_cli("run --registry \"" + f.registry.string() +
                            "\" --regressor ols --out \"" +
                            (f.dir / "noseed").string() + "\"",
                        f.dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("config files configure; flags override") {
  Fixture f = make_fixture();
  fs::path out = f.dir / "cfg";
  std::string config = std::string("{\n") +
                       "  \"registry\": \"" + f.registry.string() + "\",\n" +
                       "  \"regressors\": [\"ols\"],\n" +
                       "  \"seed\": 29,\n" +
                       "  \"outer_folds\": 3,\n  \"inner_folds\": 3,\n" +
                       "  \"k_cap\": 5,\n  \"restarts\": 6,\n" +
                       "  \"out\": \"" + out.string() + "\"\n}";
  testutil::write_file(f.dir / "config.json", config);

  CliResult r = run_cli("run --config \"" + (f.dir / "config.json").string() + "\"",
                        f.dir);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  std::vector<std::string> lines = split_lines(testutil::read_file(out / "report.csv"));
  REQUIRE(lines.size() == 2);
  CHECK(split_csv(lines[1])[1] == "ols");

  // a flag on top of the config switches the regressor
  fs::path out2 = f.dir / "cfg2";
  CliResult r2 = run_cli("run --config \"" + (f.dir / "config.json").string() +
                             "\" --regressor stepwise --out \"" + out2.string() + "\"",
                         f.dir);
  REQUIRE_MESSAGE(r2.exit_code == 0, r2.err);
  std::vector<std::string> lines2 =
      split_lines(testutil::read_file(out2 / "report.csv"));
  CHECK(split_csv(lines2[1])[1] == "stepwise");

  // unknown keys are typos, not extensions
  testutil::write_file(f.dir / "bad.json", R"({"seed": 1, "restart": 5})");
  CliResult rb = run_cli("run --config \"" + (f.dir / "bad.json").string() +
                             "\" --registry \"" + f.registry.string() + "\"",
                         f.dir);
  CHECK(rb.exit_code == 2);
  CHECK(rb.err.find("unknown key") != std::string::npos);
}
