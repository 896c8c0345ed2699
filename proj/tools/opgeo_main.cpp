#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opgeo/campaign.hpp"
#include "opgeo/errors.hpp"
#include "opgeo/funcat.hpp"
#include "opgeo/matio.hpp"
#include "opgeo/means.hpp"
#include "opgeo/version.hpp"

using namespace opgeo;

namespace {

// Comma-separated coefficient lists arrive as one token so they never swallow
// a following positional file argument.
std::vector<double> parse_coeff_csv(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    size_t used = 0;
    double value = 0;
    try {
      value = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid --poly-coeffs entry '" + piece + "'");
    }
    if (used != piece.size()) throw ConfigError("invalid --poly-coeffs entry '" + piece + "'");
    out.push_back(value);
  }
  if (out.empty()) throw ConfigError("--poly-coeffs needs at least one number");
  return out;
}

void add_campaign_flags(CLI::App* cmd, CampaignConfig& cfg, int& dim_single,
                        std::string& report_path, std::string& poly_csv) {
  cmd->add_option("--f", cfg.fn_id, "catalogue function id (default: per chain)");
  auto* dims_opt =
      cmd->add_option("--dims", cfg.dims, "comma-separated dimension cycle")->delimiter(',');
  cmd->add_option("--dim", dim_single, "single matrix dimension")->excludes(dims_opt);
  cmd->add_option("--seed", cfg.seed, "campaign seed");
  cmd->add_option("--tol", cfg.tol, "link pass tolerance");
  cmd->add_option("--report", report_path, "write the JSON report to this file");
  cmd->add_option("--quad-order", cfg.quad.base_order, "Gauss-Legendre base order");
  cmd->add_option("--quad-tol", cfg.quad.abs_tol, "quadrature refinement tolerance");
  cmd->add_option("--cond-max", cfg.cond_max, "condition number cap for generated matrices");
  cmd->add_option("--poly-coeffs", poly_csv, "comma-separated coefficients for poly_nonneg");
}

void emit_report(const std::string& json, const std::string& report_path) {
  if (report_path.empty()) {
    std::cout << json;
    return;
  }
  std::ofstream out(report_path);
  if (!out) throw ConfigError("cannot open report file '" + report_path + "'");
  out << json;
}

const ScalarFn& pick_fn(const std::string& id, const std::vector<double>& coeffs) {
  if (id == "poly_nonneg" && !coeffs.empty()) {
    // One resolve per process, so a static holds the custom polynomial.
    static const ScalarFn custom = make_poly_nonneg(coeffs);
    return custom;
  }
  return catalogue_fn(id);
}

void emit_matrix(const SymMatrix& m, const std::string& out_path) {
  if (out_path.empty()) {
    write_matrix(std::cout, m);
  } else {
    write_matrix_file(out_path, m);
  }
}

std::string flags_of(const ScalarFn& f) {
  std::string s;
  for (FnFlag flag : f.flags) s += (s.empty() ? "" : ", ") + to_string(flag);
  return s.empty() ? "none" : s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized verifier for operator geometric mean inequalities"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CampaignConfig cfg;
  int dim_single = 0;
  std::string report_path;
  std::string poly_csv;
  std::vector<std::string> chain_ids;
  std::string chain_one;
  int budget = 1000;

  CLI::App* verify = app.add_subcommand("verify", "run a verification campaign");
  verify->add_option("--chain", chain_ids, "chain id, repeatable (default: whole registry)");
  verify->add_option("--trials", cfg.trials, "trials per chain")->check(CLI::PositiveNumber);
  add_campaign_flags(verify, cfg, dim_single, report_path, poly_csv);

  CLI::App* search = app.add_subcommand("search", "stress one chain hunting for minimal slack");
  search->add_option("--chain", chain_one, "chain id")->required();
  search->add_option("--budget", budget, "number of stress trials")->check(CLI::PositiveNumber);
  add_campaign_flags(search, cfg, dim_single, report_path, poly_csv);

  CLI::App* compute = app.add_subcommand("compute", "single computations on matrix files");
  compute->require_subcommand(1);
  double t_weight = 0.5;
  std::string fn_id = "inv";
  std::vector<std::string> files;
  std::string out_path;
  std::vector<double> poly_coeffs;
  double lo = 0.0;
  double hi = 1.0;
  std::string form = "mean";
  QuadratureSpec qspec;

  CLI::App* cgmean = compute->add_subcommand("gmean", "weighted geometric mean of A and B");
  cgmean->add_option("--t", t_weight, "weight (default 0.5)");
  cgmean->add_option("files", files, "A.mat B.mat")->expected(2)->required();
  cgmean->add_option("--out", out_path, "output file (default: stdout)");

  CLI::App* cfn = compute->add_subcommand("fn", "matrix function f(A)");
  cfn->add_option("--f", fn_id, "catalogue function id")->required();
  cfn->add_option("files", files, "A.mat")->expected(1)->required();
  cfn->add_option("--out", out_path, "output file (default: stdout)");
  cfn->add_option("--poly-coeffs", poly_csv, "comma-separated coefficients for poly_nonneg");

  CLI::App* cint = compute->add_subcommand("integral", "integral term along the mean path");
  cint->add_option("--f", fn_id, "catalogue function id")->required();
  cint->add_option("--lo", lo, "lower limit (default 0)");
  cint->add_option("--hi", hi, "upper limit (default 1)");
  cint->add_option("--form", form, "mean: int f(A#_t B) dt; images: int f(A)#_t f(B) dt")
      ->check(CLI::IsMember({"mean", "images"}));
  cint->add_option("files", files, "A.mat B.mat")->expected(2)->required();
  cint->add_option("--out", out_path, "output file (default: stdout)");
  cint->add_option("--quad-order", qspec.base_order, "Gauss-Legendre base order");
  cint->add_option("--quad-tol", qspec.abs_tol, "quadrature refinement tolerance");
  cint->add_option("--poly-coeffs", poly_csv, "comma-separated coefficients for poly_nonneg");

  CLI::App* lchains = app.add_subcommand("list-chains", "list the chain registry");
  CLI::App* lfns = app.add_subcommand("list-fns", "list the function catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dim_single != 0) cfg.dims = {dim_single};
    if (!poly_csv.empty()) {
      cfg.poly_coeffs = parse_coeff_csv(poly_csv);
      poly_coeffs = cfg.poly_coeffs;
    }

    if (verify->parsed()) {
      cfg.chain_ids = chain_ids;
      CampaignResult result = run_verify(cfg);
      emit_report(report_json(cfg, result), report_path);
      for (const ChainAggregate& agg : result.chains) {
        std::cerr << agg.chain_id << ": trials " << agg.trials_run << ", hypothesis met "
                  << agg.hypothesis_met << ", failures " << agg.failures;
        if (agg.any_link) std::cerr << ", min slack " << agg.min_slack;
        std::cerr << "\n";
        if (agg.trials_run > 0 && agg.hypothesis_met == 0) {
          std::cerr << "warning: chain '" << agg.chain_id
                    << "' never met its hypotheses; the run is vacuous\n";
        }
      }
      return result.exit_code;
    }

    if (search->parsed()) {
      cfg.chain_ids = {chain_one};
      SearchResult result = run_search(cfg, budget);
      emit_report(search_json(cfg, budget, result), report_path);
      std::cerr << chain_one << ": trials " << result.trials_run << ", hypothesis met "
                << result.hypothesis_met << ", violations " << result.violations << "\n";
      return result.exit_code;
    }

    if (compute->parsed()) {
      if (cgmean->parsed()) {
        emit_matrix(gmean_t(read_matrix_file(files[0]), read_matrix_file(files[1]), t_weight),
                    out_path);
        return 0;
      }
      if (cfn->parsed()) {
        emit_matrix(matrix_function(read_matrix_file(files[0]), pick_fn(fn_id, poly_coeffs)),
                    out_path);
        return 0;
      }
      if (cint->parsed()) {
        const ScalarFn& f = pick_fn(fn_id, poly_coeffs);
        SymMatrix a = read_matrix_file(files[0]);
        SymMatrix b = read_matrix_file(files[1]);
        QuadResult r{SymMatrix::zero(a.dim()), 0};
        if (form == "mean") {
          r = integrate_matrix([&](double t) { return matrix_function(gmean_t(a, b, t), f); }, lo,
                               hi, qspec);
        } else {
          SymMatrix fa = matrix_function(a, f);
          SymMatrix fb = matrix_function(b, f);
          r = integrate_matrix([&](double t) { return gmean_t(fa, fb, t); }, lo, hi, qspec);
        }
        std::cerr << "err_estimate " << r.err_estimate << "\n";
        emit_matrix(r.value, out_path);
        return 0;
      }
    }

    if (lchains->parsed()) {
      for (const ChainSpec& c : chain_registry()) {
        std::cout << c.id << "\n    " << c.statement << "\n";
        if (c.has_fn_slot) {
          std::cout << "    fn slot (default " << c.default_fn;
          for (FnFlag flag : c.fn_required_flags) std::cout << ", needs " << to_string(flag);
          std::cout << ")\n";
        }
      }
      return 0;
    }

    if (lfns->parsed()) {
      for (const std::string& id : catalogue_ids()) {
        const ScalarFn& f = catalogue_fn(id);
        std::cout << id << "  domain " << f.domain.to_string() << "  flags: " << flags_of(f)
                  << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  return 1;
}
