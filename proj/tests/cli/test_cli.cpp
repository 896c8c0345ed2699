// End-to-end checks of the command-line binary: exit codes, matrix
// round-trips through compute, report determinism, and listings.
//
// Usage: test_cli /path/to/opgeo
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "opgeo/linalg.hpp"
#include "opgeo/matio.hpp"

namespace {

int g_failures = 0;
std::string g_bin;

int run(const std::string& args) {
  std::string cmd = "\"" + g_bin + "\" " + args;
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

void check(bool ok, const std::string& label) {
  std::cout << (ok ? "[ok] " : "[FAILED] ") << label << "\n";
  if (!ok) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool close_to(double got, double want, double tol) { return std::abs(got - want) <= tol; }

nlohmann::ordered_json parse_without_timestamp(const std::string& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(slurp(path));
  j["timestamp"] = nullptr;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli /path/to/opgeo\n";
    return 2;
  }
  g_bin = argv[1];

  // --- exit-code contract ----------------------------------------------------
  check(run("--version > /dev/null 2>&1") == 0, "--version exits 0");
  check(run("> /dev/null 2>&1") != 0, "missing subcommand is an error");
  check(run("verify --chain nope --trials 1 --dim 2 > /dev/null 2>&1") == 1,
        "unknown chain id exits 1");
  check(run("compute fn --f inv no_such_file.mat > /dev/null 2>&1") == 1,
        "unreadable input file exits 1");
  check(run("verify --chain mean-interp --trials 5 --dim 3 --seed 1 "
            "--report cli_tmp_ok.json 2> /dev/null") == 0,
        "healthy verification exits 0");
  check(run("verify --chain mean-interp --trials 5 --dim 3 --seed 1 --tol 1e-17 "
            "--report cli_tmp_viol.json 2> /dev/null") == 2,
        "an impossible tolerance exits 2 (violation)");
  check(run("verify --chain ando-max --trials 2 --dim 3 --seed 1 "
            "--report cli_tmp_vac.json 2> /dev/null") == 3,
        "a run whose hypotheses never hold exits 3 (vacuous)");

  // --- compute: weighted geometric mean ---------------------------------------
  opgeo::write_matrix_file("cli_tmp_a.mat", opgeo::SymMatrix::identity(2));
  opgeo::write_matrix_file("cli_tmp_b.mat", opgeo::SymMatrix::diagonal({4.0, 9.0}));
  check(run("compute gmean --t 0.5 cli_tmp_a.mat cli_tmp_b.mat --out cli_tmp_g.mat "
            "2> /dev/null") == 0,
        "compute gmean exits 0");
  {
    opgeo::SymMatrix g = opgeo::read_matrix_file("cli_tmp_g.mat");
    check(close_to(g(0, 0), 2.0, 1e-12) && close_to(g(1, 1), 3.0, 1e-12) &&
              close_to(g(0, 1), 0.0, 1e-12),
          "commuting mean reproduces diag(2, 3)");
  }

  // Weight 0 returns the left operand.
  opgeo::write_matrix_file("cli_tmp_c.mat", opgeo::SymMatrix(2, {2, 1, 1, 2}));
  opgeo::write_matrix_file("cli_tmp_d.mat", opgeo::SymMatrix(2, {3, 0, 0, 1}));
  check(run("compute gmean --t 0 cli_tmp_c.mat cli_tmp_d.mat --out cli_tmp_e.mat "
            "2> /dev/null") == 0,
        "compute gmean --t 0 exits 0");
  {
    opgeo::SymMatrix e = opgeo::read_matrix_file("cli_tmp_e.mat");
    opgeo::SymMatrix a = opgeo::read_matrix_file("cli_tmp_c.mat");
    check((e - a).frobenius_norm() <= 1e-11 * (1 + a.frobenius_norm()),
          "weight 0 returns the left operand");
  }

  // Frozen high-precision value.
  check(run("compute gmean cli_tmp_c.mat cli_tmp_d.mat --out cli_tmp_golden_run.mat "
            "2> /dev/null") == 0,
        "compute gmean (default weight) exits 0");
  {
    opgeo::SymMatrix got = opgeo::read_matrix_file("cli_tmp_golden_run.mat");
    opgeo::SymMatrix want =
        opgeo::read_matrix_file(std::string(OPGEO_FIXTURE_DIR) + "/gmean_2x2_half.mat");
    check((got - want).frobenius_norm() <= 1e-10,
          "midpoint mean matches the frozen high-precision value");
  }

  // --- compute: matrix function ------------------------------------------------
  opgeo::write_matrix_file("cli_tmp_f.mat", opgeo::SymMatrix::diagonal({2.0, 4.0}));
  check(run("compute fn --f inv cli_tmp_f.mat --out cli_tmp_finv.mat 2> /dev/null") == 0,
        "compute fn exits 0");
  {
    opgeo::SymMatrix m = opgeo::read_matrix_file("cli_tmp_finv.mat");
    check(close_to(m(0, 0), 0.5, 1e-12) && close_to(m(1, 1), 0.25, 1e-12),
          "inversion of diag(2, 4) is diag(0.5, 0.25)");
  }
  check(run("compute fn --f poly_nonneg --poly-coeffs 2,1 cli_tmp_f.mat --out cli_tmp_fp.mat "
            "2> /dev/null") == 0,
        "compute fn with custom coefficients exits 0");
  {
    opgeo::SymMatrix m = opgeo::read_matrix_file("cli_tmp_fp.mat");
    check(close_to(m(0, 0), 4.0, 1e-12) && close_to(m(1, 1), 6.0, 1e-12),
          "custom polynomial evaluates 2 + x");
  }

  // --- compute: path integral ---------------------------------------------------
  opgeo::write_matrix_file("cli_tmp_one.mat", opgeo::SymMatrix(1, {1.0}));
  opgeo::write_matrix_file("cli_tmp_four.mat", opgeo::SymMatrix(1, {4.0}));
  const double log_mean = 3.0 / std::log(4.0);
  for (const std::string form : {"mean", "images"}) {
    check(run("compute integral --f identity --form " + form +
              " cli_tmp_one.mat cli_tmp_four.mat --out cli_tmp_int.mat 2> /dev/null") == 0,
          "compute integral --form " + form + " exits 0");
    opgeo::SymMatrix m = opgeo::read_matrix_file("cli_tmp_int.mat");
    check(close_to(m(0, 0), log_mean, 1e-12),
          "path integral from 1 to 4 (" + form + ") is the logarithmic mean 3/ln 4");
  }

  // --- report determinism --------------------------------------------------------
  check(run("verify --chain geo-def --trials 10 --dim 2 --seed 3 --report cli_tmp_r1.json "
            "2> /dev/null") == 0,
        "report run 1 exits 0");
  check(run("verify --chain geo-def --trials 10 --dim 2 --seed 3 --report cli_tmp_r2.json "
            "2> /dev/null") == 0,
        "report run 2 exits 0");
  {
    nlohmann::ordered_json j1 = parse_without_timestamp("cli_tmp_r1.json");
    nlohmann::ordered_json j2 = parse_without_timestamp("cli_tmp_r2.json");
    check(j1 == j2, "reports are identical once the timestamp is removed");
    check(j1.contains("version") && j1.contains("config") && j1.contains("chains"),
          "report carries version, config, and chains");
  }

  // --- search -----------------------------------------------------------------------
  check(run("search --chain geo-def --budget 8 --dim 2 --seed 1 --report cli_tmp_s.json "
            "2> /dev/null") == 0,
        "search smoke run exits 0");
  {
    nlohmann::ordered_json js = nlohmann::ordered_json::parse(slurp("cli_tmp_s.json"));
    bool sorted = true;
    double prev = -1e300;
    for (const auto& hit : js["search"]["worst"]) {
      double s = hit["slack"].get<double>();
      sorted = sorted && (s >= prev);
      prev = s;
    }
    check(js["search"]["trials_run"] == 8 && !js["search"]["worst"].empty() && sorted,
          "search report lists ascending worst slacks");
  }

  // --- listings ------------------------------------------------------------------------
  check(run("list-chains > cli_tmp_lc.txt 2> /dev/null") == 0, "list-chains exits 0");
  {
    std::string text = slurp("cli_tmp_lc.txt");
    check(text.find("hh-mr") != std::string::npos && text.find("ando-max") != std::string::npos,
          "list-chains names the registry entries");
  }
  check(run("list-fns > cli_tmp_lf.txt 2> /dev/null") == 0, "list-fns exits 0");
  {
    std::string text = slurp("cli_tmp_lf.txt");
    check(text.find("moebius") != std::string::npos &&
              text.find("poly_nonneg") != std::string::npos,
          "list-fns names the catalogue entries");
  }

  if (g_failures) {
    std::cout << g_failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}
