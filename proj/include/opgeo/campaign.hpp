#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opgeo/chains.hpp"
#include "opgeo/gen.hpp"

namespace opgeo {

// Shared configuration for verify/search campaigns.
struct CampaignConfig {
  std::vector<std::string> chain_ids;  // empty means the full registry
  std::string fn_id;                   // empty means each chain's default
  int trials = 500;
  std::vector<int> dims = {2, 3, 4, 5, 6, 7, 8};
  uint64_t seed = 0;
  double tol = 1e-8;
  QuadratureSpec quad{};
  double cond_max = 100.0;
  Interval spectrum_interval{0.1, 10.0};
  double norm_cap = 0.9;
  std::vector<double> poly_coeffs;  // overrides poly_nonneg when non-empty
  // Fixed values for named scalar parameters (acceptance grids); everything
  // else is drawn from the chain's declared ranges.
  std::vector<std::pair<std::string, double>> param_overrides;

  void validate() const;  // throws ConfigError / LookupError
};

struct ChainAggregate {
  std::string chain_id;
  std::string fn_id;  // empty when the chain takes no function
  int trials_run = 0;
  int hypothesis_met = 0;
  int failures = 0;
  double min_slack = 0;  // over non-informational links of hypothesis-met trials
  InputsDigest argmin;
  bool any_link = false;
};

struct CampaignResult {
  std::vector<ChainAggregate> chains;
  int exit_code = 0;  // 0 pass, 2 violation, 3 vacuous hypotheses
};

// Draws the inputs for one trial of a chain.  Exposed so tests and the
// acceptance suite can replay exactly what the campaigns run.
Bindings make_chain_inputs(const ChainSpec& spec, const ScalarFn* fn, const GenConfig& gen_cfg,
                           uint64_t stream, const QuadratureSpec& quad,
                           const std::vector<std::pair<std::string, double>>& overrides = {});

// Resolves the function bound to a chain under a config (override, default,
// admissibility check).  Returns nullptr for chains without a fn slot.
const ScalarFn* resolve_fn(const ChainSpec& spec, const CampaignConfig& cfg);

// Runs the verification campaign.  Trial `k` of a chain uses stream k and the
// dim dims[k % dims.size()].
CampaignResult run_verify(const CampaignConfig& cfg);

// JSON text of the campaign report (schema keys: version, timestamp, config,
// chains).  Deterministic except for the timestamp.
std::string report_json(const CampaignConfig& cfg, const CampaignResult& result);

struct SearchHit {
  double slack;
  std::string link;
  uint64_t seed;
  uint64_t stream;
  int dim;
  std::vector<std::pair<std::string, double>> params;
};

struct SearchResult {
  std::vector<SearchHit> worst;  // ascending slack, at most k entries
  int violations = 0;
  int hypothesis_met = 0;
  int trials_run = 0;
  int exit_code = 0;
};

// Stress mode: budget trials on one chain with cond_max relaxed to 1e4,
// keeping the k smallest link slacks.  Exit 2 only on a genuine violation.
SearchResult run_search(const CampaignConfig& cfg, int budget, int k = 10);

std::string search_json(const CampaignConfig& cfg, int budget, const SearchResult& result);

}  // namespace opgeo
