#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return NODALAB_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > cli_stdout.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char ch : text)
    if (ch == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve: artifacts land in the output directory") {
  TempDir dir("cli_out_solve");
  const int rc = run("solve --family square_mode --k 1 --m 1 --domain square "
                     "-o " + dir.path.string());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "solution.csv"));
  CHECK(fs::exists(dir.path / "plot_u_slice.dat"));
  CHECK(fs::exists(dir.path / "report_solve.json"));
  const auto rep =
      nlohmann::json::parse(slurp(dir.path / "report_solve.json"));
  CHECK(rep["command"] == "solve");
  CHECK(std::abs(rep["manifest"]["sup_norm"].get<double>() - 1.0) <= 0.01);
  // header + data rows
  CHECK(count_lines(slurp(dir.path / "solution.csv")) > 100);
}

TEST_CASE("frequency: profile rows cover the center/radius grid") {
  TempDir dir("cli_out_freq");
  const int rc = run(
      "frequency --family square_mode --k 1 --m 1 --domain square "
      "--center-grid 2 --radii 0.1 0.2 -o " + dir.path.string());
  CHECK(rc == 0);
  const std::string csv = slurp(dir.path / "freq_profiles.csv");
  CHECK(count_lines(csv) == 1 + 4 * 2);  // header + centers x radii
  const auto rep =
      nlohmann::json::parse(slurp(dir.path / "report_frequency.json"));
  bool all_pass = true;
  for (const auto& r : rep["records"]) all_pass &= r["pass"].get<bool>();
  CHECK(all_pass);
}

TEST_CASE("divide: halving model exits clean, stuck model fails") {
  TempDir dir("cli_out_div");
  const int ok = run("divide --oracle halving --synthetic-M 18 --A 3 "
                     "--M0 1.5 --R 0.1 -o " + dir.path.string());
  CHECK(ok == 0);
  const auto acc = nlohmann::json::parse(slurp(dir.path / "accounting.json"));
  CHECK(acc["recursion_le_series"].get<bool>());
  CHECK(std::abs(acc["kappa"].get<double>() - 17.0 / 18.0) <= 1e-15);
  CHECK(acc["k0"].get<int>() == 4);
  CHECK(fs::exists(dir.path / "cube_tree.txt"));

  TempDir dir2("cli_out_div_stuck");
  const int bad = run("divide --oracle stuck --synthetic-M 18 --A 3 "
                      "--M0 1.5 --R 0.1 --max-gen 4 -o " +
                      dir2.path.string());
  CHECK(bad != 0);
}

TEST_CASE("report: empty directory is a dependency error") {
  TempDir dir("cli_out_empty");
  CHECK(run("report " + dir.path.string()) == 2);
  CHECK(run("report " + (dir.path / "missing_subdir").string()) == 2);
}

TEST_CASE("report: consolidates prior study reports") {
  TempDir dir("cli_out_rep");
  CHECK(run("solve --family square_mode --k 2 --m 1 --domain square -o " +
            dir.path.string()) == 0);
  CHECK(run("divide --oracle halving --synthetic-M 18 -o " +
            dir.path.string()) == 0);
  CHECK(run("report " + dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "checks.csv"));
  CHECK(fs::exists(dir.path / "summary.json"));
  const auto sum = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(sum["report_files"].get<int>() >= 2);
  CHECK(sum["failures"].get<int>() == 0);
  CHECK(sum["covered"].size() >= 1);
}

TEST_CASE("config file: loads, overrides apply, bad values rejected") {
  TempDir dir("cli_out_cfg");
  const fs::path cfg_path = dir.path / "run.json";
  {
    nlohmann::json cfg{{"domain", {{"kind", "rectangle"},
                                   {"width", 1.0},
                                   {"height", 1.0}}},
                       {"field", {{"family", "square_mode"},
                                  {"k", 1},
                                  {"m", 1}}},
                       {"outdir", dir.path.string()}};
    std::ofstream out(cfg_path);
    out << cfg.dump(2);
  }
  CHECK(run("solve --config " + cfg_path.string()) == 0);
  // flag override beats the file value
  CHECK(run("solve --config " + cfg_path.string() + " --family harmonic_poly "
            "--k 2") == 0);
  // config errors are reported as exit 2, not a crash
  CHECK(run("solve --config " + cfg_path.string() + " --mesh-h 0.9") == 2);
  CHECK(run("solve --domain bogus") == 2);
  CHECK(run("solve --config " + (dir.path / "nope.json").string()) == 2);
}

TEST_CASE("determinism: identical runs produce identical bytes") {
  TempDir a("cli_out_det_a");
  TempDir b("cli_out_det_b");
  const std::string args =
      "frequency --family square_mode --k 2 --m 2 --domain square "
      "--center-grid 2 --radii 0.1 0.2 --seed 7 -o ";
  CHECK(run(args + a.path.string()) == 0);
  CHECK(run(args + b.path.string()) == 0);
  CHECK(slurp(a.path / "freq_profiles.csv") ==
        slurp(b.path / "freq_profiles.csv"));
  CHECK(slurp(a.path / "report_frequency.json") ==
        slurp(b.path / "report_frequency.json"));
}

TEST_CASE("unknown subcommand and missing arguments fail fast") {
  CHECK(run("frobnicate") != 0);
  CHECK(run("") != 0);
}

}  // TEST_SUITE
