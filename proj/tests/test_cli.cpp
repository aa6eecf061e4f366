#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "csv_format.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& stem) {
  static int counter = 0;
  return fs::temp_directory_path() /
         (stem + "_" + std::to_string(::getpid()) + "_" +
          std::to_string(counter++));
}

RunResult run_cli(const std::string& args) {
  fs::path out = temp_file("cli_out");
  std::string cmd = std::string(FPT_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> /dev/null";
  int raw = std::system(cmd.c_str());
  RunResult r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
  fs::remove(out);
  return r;
}

fs::path write_config(const std::string& content) {
  fs::path p = temp_file("cli_cfg");
  std::ofstream out(p);
  out << content;
  return p;
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  bool header = true;
  while (std::getline(lines, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

double phi(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("csv formatting contract") {
  CHECK(fpt_cli::csv_cell(1.0 / 3) == "0.3333333333");
  CHECK(fpt_cli::csv_cell(2.0) == "2");
  CHECK(fpt_cli::csv_row({0.5, 1.0 / 3}) == "0.5,0.3333333333\n");
  CHECK(fpt_cli::csv_header({"t", "survival", "density"}) ==
        "t,survival,density\n");
}

TEST_CASE("laplace subcommand prints the closed form") {
  // an empty breakpoints list is not valid config; use a single-segment form
  fs::path cfg = write_config(
      "[drift]\nbreakpoints = 0\nslopes = 0, 0\nintercepts = 0, 0\n"
      "[query]\nx0 = 0\nbarrier = 1\n[grid]\nt_max = 2\nsteps = 4\n");
  RunResult r = run_cli("-c " + cfg.string() + " laplace --lambda 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.3678794412\n");

  RunResult bad = run_cli("-c " + cfg.string() + " laplace --lambda -1");
  CHECK(bad.exit_code == 2);
  fs::remove(cfg);
}

TEST_CASE("survival subcommand matches the reflection principle") {
  fs::path cfg = write_config(
      "[drift]\nbreakpoints = 0\nslopes = 0, 0\nintercepts = 0, 0\n"
      "[query]\nx0 = 0\nbarrier = 1\n[grid]\nt_max = 2\nsteps = 4\n");
  RunResult r = run_cli("-c " + cfg.string() + " survival --with-density");
  CHECK(r.exit_code == 0);
  CHECK(r.out.substr(0, r.out.find('\n')) == "t,survival,density");
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    double want = 1.0 - 2.0 * (1.0 - phi(1.0 / std::sqrt(row[0])));
    CHECK(std::abs(row[1] - want) < 1e-6);
    CHECK(row[2] > 0.0);
  }
  // no trailing delimiter, LF endings
  CHECK(r.out.find(",\n") == std::string::npos);
  CHECK(r.out.find('\r') == std::string::npos);
  CHECK(r.out.back() == '\n');
  fs::remove(cfg);
}

TEST_CASE("density and bound subcommands, certificate holds") {
  fs::path cfg = write_config(
      "[drift]\nbreakpoints = -1, 1\nslopes = 0, -1, 0\n"
      "intercepts = 1, 0, -1\n[query]\nx0 = 0\nbarrier = 1\n"
      "[grid]\nt_max = 2\nsteps = 8\n");
  RunResult dens = run_cli("-c " + cfg.string() + " density");
  RunResult bound = run_cli("-c " + cfg.string() + " bound");
  CHECK(dens.exit_code == 0);
  CHECK(bound.exit_code == 0);
  auto drows = parse_csv(dens.out);
  auto brows = parse_csv(bound.out);
  REQUIRE(drows.size() == 8);
  REQUIRE(brows.size() == 8);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(drows[i][1] <= brows[i][1] + 1e-6);
  fs::remove(cfg);
}

TEST_CASE("approx subcommand prints the error budget") {
  fs::path cfg = write_config(
      "[drift]\nexpression = tanh(x)\ndomain_lo = -4\ndomain_hi = 4\n"
      "m1 = 1\nm2 = 1\n[query]\nx0 = 0\nbarrier = 1\n"
      "[grid]\nt_max = 1\nsteps = 4\n");
  RunResult r = run_cli("-c " + cfg.string() + " approx --n 16");
  CHECK(r.exit_code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == 16.0);
  CHECK(rows[0][1] == doctest::Approx(1.0 / 16));
  CHECK(rows[0][2] > 0.0);
  fs::remove(cfg);
}

TEST_CASE("mc subcommand is reproducible and --out writes a file") {
  fs::path cfg = write_config(std::string(
      "[drift]\nbreakpoints = -1, 1\nslopes = 0, -1, 0\n"
      "intercepts = 1, 0, -1\n[query]\nx0 = 0\nbarrier = 1\n"
      "[grid]\nt_max = 1\nsteps = 2\n[mc]\npaths = 20000\ndt = 0.01\n"
      "seed = 11\n"));
  RunResult a = run_cli("-c " + cfg.string() + " mc");
  RunResult b = run_cli("-c " + cfg.string() + " mc");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);  // byte-identical for fixed config and seed
  auto rows = parse_csv(a.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] > 0.0);
  CHECK(rows[0][0] < 1.0);

  fs::path out = temp_file("mc_out");
  RunResult c = run_cli("-c " + cfg.string() + " -o " + out.string() + " mc");
  CHECK(c.exit_code == 0);
  CHECK(c.out.empty());
  CHECK(slurp(out) == a.out);
  fs::remove(out);
  fs::remove(cfg);
}

TEST_CASE("configuration errors exit with code 2") {
  fs::path cfg = write_config(
      "[drift]\nbreakpoints = 0\nslopes = 0, 0\nintercepts = 0, 0\n"
      "[query]\nx0 = 2\nbarrier = 1\n");
  CHECK(run_cli("-c " + cfg.string() + " survival").exit_code == 2);
  fs::remove(cfg);
  CHECK(run_cli("-c /no/such/file.cfg survival").exit_code == 2);
  CHECK(run_cli("survival").exit_code == 2);  // missing --config

  fs::path cfg2 = write_config(
      "[drift]\nbreakpoints = 0\nslopes = 0, 0\nintercepts = 0, 0\n"
      "[query]\nx0 = 0\nbarrier = 1\n[mystery]\nk = 1\n");
  CHECK(run_cli("-c " + cfg2.string() + " survival").exit_code == 2);
  fs::remove(cfg2);
}
