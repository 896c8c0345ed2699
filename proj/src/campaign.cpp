#include "opgeo/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <memory>
#include <utility>

#include "json.hpp"
#include "opgeo/errors.hpp"
#include "opgeo/funcat.hpp"
#include "opgeo/means.hpp"
#include "opgeo/version.hpp"

namespace opgeo {

namespace {

using nlohmann::ordered_json;

std::string timestamp_utc() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

GenConfig trial_gen_config(const CampaignConfig& cfg, int trial) {
  GenConfig g;
  g.seed = cfg.seed;
  g.dim = cfg.dims[static_cast<size_t>(trial) % cfg.dims.size()];
  g.cond_max = cfg.cond_max;
  g.spectrum_interval = cfg.spectrum_interval;
  g.norm_cap = cfg.norm_cap;
  return g;
}

std::vector<const ChainSpec*> selected_chains(const CampaignConfig& cfg) {
  std::vector<const ChainSpec*> specs;
  if (cfg.chain_ids.empty()) {
    for (const ChainSpec& c : chain_registry()) specs.push_back(&c);
  } else {
    for (const std::string& id : cfg.chain_ids) specs.push_back(&find_chain(id));
  }
  return specs;
}

ordered_json config_json(const CampaignConfig& cfg) {
  ordered_json jc;
  if (cfg.chain_ids.empty()) {
    jc["chains"] = "all";
  } else {
    jc["chains"] = cfg.chain_ids;
  }
  if (cfg.fn_id.empty()) {
    jc["fn"] = nullptr;
  } else {
    jc["fn"] = cfg.fn_id;
  }
  jc["trials"] = cfg.trials;
  jc["dims"] = cfg.dims;
  jc["seed"] = cfg.seed;
  jc["tol"] = cfg.tol;
  jc["quad"] = {{"base_order", cfg.quad.base_order},
                {"max_refinements", cfg.quad.max_refinements},
                {"abs_tol", cfg.quad.abs_tol}};
  jc["cond_max"] = cfg.cond_max;
  jc["spectrum"] = {cfg.spectrum_interval.lo, cfg.spectrum_interval.hi};
  jc["norm_cap"] = cfg.norm_cap;
  if (!cfg.poly_coeffs.empty()) jc["poly_coeffs"] = cfg.poly_coeffs;
  if (!cfg.param_overrides.empty()) {
    ordered_json jp;
    for (const auto& [name, value] : cfg.param_overrides) jp[name] = value;
    jc["params"] = jp;
  }
  return jc;
}

}  // namespace

void CampaignConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (dims.empty()) throw ConfigError("dims must not be empty");
  for (int d : dims) {
    if (d < 1 || d > 64) throw ConfigError("dims entries must lie in [1, 64]");
  }
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (!(cond_max >= 1)) throw ConfigError("cond-max must be at least 1");
  if (!(spectrum_interval.lo > 0)) throw ConfigError("spectrum interval must be positive");
  if (!(norm_cap > 0) || !(norm_cap < 1)) throw ConfigError("norm-cap must lie in (0, 1)");
  if (quad.base_order < 2) throw ConfigError("quadrature base order must be at least 2");
  if (quad.max_refinements < 1) throw ConfigError("quadrature refinement budget must be at least 1");
  if (!(quad.abs_tol > 0)) throw ConfigError("quadrature abs tol must be positive");
  for (const std::string& id : chain_ids) find_chain(id);
  if (!fn_id.empty()) catalogue_fn(fn_id);
  if (!poly_coeffs.empty()) make_poly_nonneg(poly_coeffs);
}

const ScalarFn* resolve_fn(const ChainSpec& spec, const CampaignConfig& cfg) {
  if (!spec.has_fn_slot) return nullptr;
  const std::string id = cfg.fn_id.empty() ? spec.default_fn : cfg.fn_id;
  const ScalarFn* f = nullptr;
  if (id == "poly_nonneg" && !cfg.poly_coeffs.empty()) {
    // Custom-coefficient polynomials live here so callers keep plain pointers.
    static std::map<std::vector<double>, ScalarFn> custom;
    auto it = custom.find(cfg.poly_coeffs);
    if (it == custom.end()) it = custom.emplace(cfg.poly_coeffs, make_poly_nonneg(cfg.poly_coeffs)).first;
    f = &it->second;
  } else {
    f = &catalogue_fn(id);
  }
  if (!spec.admits(*f)) {
    std::string needs;
    for (FnFlag flag : spec.fn_required_flags) {
      needs += (needs.empty() ? "" : ", ") + to_string(flag);
    }
    throw ConfigError("function '" + id + "' is not admissible for chain '" + spec.id +
                      "' (requires: " + needs + ")");
  }
  return f;
}

Bindings make_chain_inputs(const ChainSpec& spec, const ScalarFn* fn, const GenConfig& gen_cfg,
                           uint64_t stream, const QuadratureSpec& quad,
                           const std::vector<std::pair<std::string, double>>& overrides) {
  gen_cfg.validate();
  Bindings b;
  b.quad = quad;
  b.fn = fn;
  Rng rng(gen_cfg.seed, stream);
  const bool contraction_fn = fn && fn->has(FnFlag::requires_contraction);

  switch (spec.profile) {
    case InputProfile::spd_pair: {
      SymMatrix a = contraction_fn ? random_contraction_spd(rng, gen_cfg) : random_spd(rng, gen_cfg);
      SymMatrix bb = contraction_fn ? random_contraction_spd(rng, gen_cfg) : random_spd(rng, gen_cfg);
      // The norm chain conditions on ||A|| <= ||B||; orient the draw so the
      // hypothesis is met instead of discarding half the trials.
      if (spec.id == "norm-cor" && operator_norm(a) > operator_norm(bb)) std::swap(a, bb);
      b.mats.emplace("A", std::move(a));
      b.mats.emplace("B", std::move(bb));
      break;
    }
    case InputProfile::ordered_pair: {
      if (!fn) throw ConfigError("chain '" + spec.id + "' draws hypothesis pairs and needs a function");
      auto [a, bb] = pair_with_hypothesis(*fn, gen_cfg, PairStrategy::construct, rng);
      b.mats.emplace("A", std::move(a));
      b.mats.emplace("B", std::move(bb));
      break;
    }
    case InputProfile::quad_ordered: {
      SymMatrix a = random_spd(rng, gen_cfg);
      SymMatrix bb = random_spd(rng, gen_cfg);
      SymMatrix c = a + random_psd(rng, gen_cfg.dim, rng.uniform(0.0, 0.5) * operator_norm(a));
      SymMatrix d = bb + random_psd(rng, gen_cfg.dim, rng.uniform(0.0, 0.5) * operator_norm(bb));
      b.mats.emplace("A", std::move(a));
      b.mats.emplace("B", std::move(bb));
      b.mats.emplace("C", std::move(c));
      b.mats.emplace("D", std::move(d));
      break;
    }
    case InputProfile::contraction_pair: {
      b.mats.emplace("A", random_contraction_spd(rng, gen_cfg));
      b.mats.emplace("B", random_contraction_spd(rng, gen_cfg));
      break;
    }
    case InputProfile::ando_perturbed: {
      SymMatrix a = random_spd(rng, gen_cfg);
      SymMatrix bb = random_spd(rng, gen_cfg);
      SymMatrix g = gmean(a, bb);
      SymMatrix h = random_symmetric_unit(rng, gen_cfg.dim);
      const double eps = rng.uniform(0.0, 0.2 * operator_norm(g));
      SymMatrix x = g + eps * h;
      b.mats.emplace("A", std::move(a));
      b.mats.emplace("B", std::move(bb));
      b.mats.emplace("X", std::move(x));
      break;
    }
    case InputProfile::posmap_pair: {
      b.mats.emplace("A", random_spd(rng, gen_cfg));
      b.mats.emplace("B", random_spd(rng, gen_cfg));
      std::shared_ptr<PositiveLinearMap> pm;
      switch (stream % 3) {
        case 0: {
          const int k = std::max(1, gen_cfg.dim - 1);
          Matrix q = random_orthogonal(rng, gen_cfg.dim);
          Matrix v(gen_cfg.dim, k);
          for (int i = 0; i < gen_cfg.dim; ++i)
            for (int j = 0; j < k; ++j) v.at(i, j) = q.at(i, j);
          pm = std::make_shared<PositiveLinearMap>(make_compression(v));
          break;
        }
        case 1:
          pm = std::make_shared<PositiveLinearMap>(
              make_diag_block(gen_cfg.dim, std::max(1, gen_cfg.dim - 1)));
          break;
        default:
          pm = std::make_shared<PositiveLinearMap>(make_trace_map(gen_cfg.dim));
          break;
      }
      b.posmap_owned = pm;
      b.posmap = b.posmap_owned.get();
      break;
    }
    case InputProfile::scalar_interval: {
      double x = rng.log_uniform(gen_cfg.spectrum_interval.lo, gen_cfg.spectrum_interval.hi);
      double y = rng.log_uniform(gen_cfg.spectrum_interval.lo, gen_cfg.spectrum_interval.hi);
      while (x == y) y = rng.log_uniform(gen_cfg.spectrum_interval.lo, gen_cfg.spectrum_interval.hi);
      b.scalars["a"] = std::min(x, y);
      b.scalars["b"] = std::max(x, y);
      break;
    }
  }

  for (const ScalarParam& p : spec.scalar_params) b.scalars[p.name] = rng.uniform(p.lo, p.hi);
  if (spec.id == "power-cmp" && b.scalars["t"] > b.scalars["s"]) {
    std::swap(b.scalars["t"], b.scalars["s"]);
  }
  for (const auto& [name, value] : overrides) {
    auto it = b.scalars.find(name);
    if (it == b.scalars.end())
      throw ConfigError("chain '" + spec.id + "' has no parameter named '" + name + "'");
    it->second = value;
  }
  return b;
}

CampaignResult run_verify(const CampaignConfig& cfg) {
  cfg.validate();
  CampaignResult result;
  for (const ChainSpec* spec : selected_chains(cfg)) {
    const ScalarFn* fn = resolve_fn(*spec, cfg);
    ChainAggregate agg;
    agg.chain_id = spec->id;
    agg.fn_id = fn ? fn->id : "";
    for (int k = 0; k < cfg.trials; ++k) {
      Bindings inputs = make_chain_inputs(*spec, fn, trial_gen_config(cfg, k),
                                          static_cast<uint64_t>(k), cfg.quad, cfg.param_overrides);
      ChainReport rep = check_chain(*spec, inputs, cfg.tol, cfg.quad);
      rep.digest.seed = cfg.seed;
      rep.digest.stream = static_cast<uint64_t>(k);
      ++agg.trials_run;
      if (rep.verdict == Verdict::hypothesis_not_met) continue;
      ++agg.hypothesis_met;
      if (rep.verdict == Verdict::fail) ++agg.failures;
      for (const LinkResult& link : rep.links) {
        if (link.informational) continue;
        if (!agg.any_link || link.slack < agg.min_slack) {
          agg.any_link = true;
          agg.min_slack = link.slack;
          agg.argmin = rep.digest;
        }
      }
    }
    result.chains.push_back(std::move(agg));
  }

  bool violation = false;
  bool vacuous = false;
  for (const ChainAggregate& agg : result.chains) {
    if (agg.failures > 0) violation = true;
    if (agg.trials_run > 0 && agg.hypothesis_met == 0) vacuous = true;
  }
  result.exit_code = violation ? 2 : (vacuous ? 3 : 0);
  return result;
}

std::string report_json(const CampaignConfig& cfg, const CampaignResult& result) {
  ordered_json j;
  j["version"] = kVersion;
  j["timestamp"] = timestamp_utc();
  j["config"] = config_json(cfg);
  j["chains"] = ordered_json::array();
  for (const ChainAggregate& agg : result.chains) {
    ordered_json ja;
    ja["id"] = agg.chain_id;
    if (agg.fn_id.empty()) {
      ja["fn"] = nullptr;
    } else {
      ja["fn"] = agg.fn_id;
    }
    ja["trials_run"] = agg.trials_run;
    ja["hypothesis_met"] = agg.hypothesis_met;
    ja["failures"] = agg.failures;
    if (agg.any_link) {
      ja["min_slack"] = agg.min_slack;
      ja["argmin"] = {{"seed", agg.argmin.seed}, {"stream", agg.argmin.stream}, {"dim", agg.argmin.dim}};
    } else {
      ja["min_slack"] = nullptr;
      ja["argmin"] = nullptr;
    }
    j["chains"].push_back(std::move(ja));
  }
  return j.dump(2) + "\n";
}

SearchResult run_search(const CampaignConfig& cfg, int budget, int k) {
  cfg.validate();
  if (budget < 1) throw ConfigError("search budget must be at least 1");
  if (k < 1) throw ConfigError("search must keep at least one hit");
  if (cfg.chain_ids.size() != 1) throw ConfigError("search runs on exactly one chain id");
  const ChainSpec& spec = find_chain(cfg.chain_ids.front());
  const ScalarFn* fn = resolve_fn(spec, cfg);

  CampaignConfig stress = cfg;
  stress.cond_max = std::max(cfg.cond_max, 1e4);

  SearchResult result;
  for (int trial = 0; trial < budget; ++trial) {
    Bindings inputs = make_chain_inputs(spec, fn, trial_gen_config(stress, trial),
                                        static_cast<uint64_t>(trial), stress.quad,
                                        stress.param_overrides);
    ChainReport rep = check_chain(spec, inputs, stress.tol, stress.quad);
    rep.digest.seed = stress.seed;
    rep.digest.stream = static_cast<uint64_t>(trial);
    ++result.trials_run;
    if (rep.verdict == Verdict::hypothesis_not_met) continue;
    ++result.hypothesis_met;
    for (const LinkResult& link : rep.links) {
      if (link.informational) continue;
      if (!link.pass) ++result.violations;
      SearchHit hit;
      hit.slack = link.slack;
      hit.link = link.lhs_label + (spec.relation == Relation::equality ? " = " : " <= ") +
                 link.rhs_label;
      hit.seed = rep.digest.seed;
      hit.stream = rep.digest.stream;
      hit.dim = rep.digest.dim;
      hit.params = rep.digest.params;
      // Bounded insertion keeps the k smallest slacks; ties keep the earlier
      // trial, so the listing depends only on the seed.
      auto pos = std::upper_bound(result.worst.begin(), result.worst.end(), hit,
                                  [](const SearchHit& a, const SearchHit& b) { return a.slack < b.slack; });
      if (pos != result.worst.end() || result.worst.size() < static_cast<size_t>(k)) {
        result.worst.insert(pos, std::move(hit));
        if (result.worst.size() > static_cast<size_t>(k)) result.worst.pop_back();
      }
    }
  }
  result.exit_code = result.violations > 0 ? 2 : (result.hypothesis_met == 0 ? 3 : 0);
  return result;
}

std::string search_json(const CampaignConfig& cfg, int budget, const SearchResult& result) {
  ordered_json j;
  j["version"] = kVersion;
  j["timestamp"] = timestamp_utc();
  ordered_json jc = config_json(cfg);
  jc["budget"] = budget;
  j["config"] = std::move(jc);
  ordered_json js;
  js["trials_run"] = result.trials_run;
  js["hypothesis_met"] = result.hypothesis_met;
  js["violations"] = result.violations;
  js["worst"] = ordered_json::array();
  for (const SearchHit& hit : result.worst) {
    ordered_json jh;
    jh["slack"] = hit.slack;
    jh["link"] = hit.link;
    jh["seed"] = hit.seed;
    jh["stream"] = hit.stream;
    jh["dim"] = hit.dim;
    ordered_json jp = ordered_json::object();
    for (const auto& [name, value] : hit.params) jp[name] = value;
    jh["params"] = std::move(jp);
    js["worst"].push_back(std::move(jh));
  }
  j["search"] = std::move(js);
  return j.dump(2) + "\n";
}

}  // namespace opgeo
