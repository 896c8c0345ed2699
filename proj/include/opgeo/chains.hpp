#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opgeo/funcat.hpp"
#include "opgeo/linalg.hpp"
#include "opgeo/quad.hpp"
#include "opgeo/scalar_fn.hpp"

namespace opgeo {

// Everything a chain term may reference: named matrices (A, B, C, D, X),
// named scalars (t, s, u, nu, alpha, a, b), the scalar function bound to the
// chain's fn slot, an optional positive linear map, and the quadrature spec
// integral terms must use.
struct Bindings {
  std::map<std::string, SymMatrix> mats;
  std::map<std::string, double> scalars;
  const ScalarFn* fn = nullptr;
  const PositiveLinearMap* posmap = nullptr;
  // Keeps a generated map alive when the bindings own it; posmap aliases it.
  std::shared_ptr<const PositiveLinearMap> posmap_owned;
  QuadratureSpec quad{};

  const SymMatrix& mat(const std::string& name) const;
  double scalar(const std::string& name) const;
  const ScalarFn& fn_ref() const;
};

// Quadrature error estimates accumulated while evaluating terms.
struct EvalLog {
  std::vector<double> quad_errors;
};

using TermValue = std::variant<SymMatrix, double>;

struct Term {
  std::string label;
  std::function<TermValue(const Bindings&, EvalLog&)> eval;
};

// Evaluates one term; TermEvalError wraps any library error with the term's
// label.  Passing log=nullptr discards quadrature estimates.
TermValue evaluate_term(const Term& term, const Bindings& b, EvalLog* log = nullptr);

struct Hypothesis {
  std::string name;
  std::function<bool(const Bindings&, double tol)> holds;
};

enum class Relation { loewner_chain, scalar_chain, equality };

// How the campaign driver draws inputs for a chain.
enum class InputProfile {
  spd_pair,          // A, B independent SPD (contractions when fn requires it)
  ordered_pair,      // A, B with f(A) <= f(B) via the construct strategy
  quad_ordered,      // A, B plus C = A + P, D = B + Q
  contraction_pair,  // A, B contractions regardless of fn
  ando_perturbed,    // A, B plus X = A#B + eps*H candidate
  posmap_pair,       // A, B plus a positive linear map binding
  scalar_interval,   // scalars a < b, no matrices
};

struct ScalarParam {
  std::string name;
  double lo;
  double hi;
};

// Study-only link: compares one already-evaluated chain term against an extra
// expression.  Reported, never part of the verdict.
struct InfoLink {
  int lhs_index;
  Term rhs;
};

struct ChainSpec {
  std::string id;
  std::string statement;  // ASCII rendering for list-chains
  Relation relation;
  InputProfile profile;
  std::vector<Hypothesis> hypotheses;
  std::vector<Term> terms;
  std::optional<InfoLink> info_link;
  std::vector<ScalarParam> scalar_params;
  bool has_fn_slot = false;
  std::set<FnFlag> fn_required_flags;  // admissibility when has_fn_slot
  std::string default_fn;              // empty when !has_fn_slot

  bool admits(const ScalarFn& f) const;
};

struct LinkResult {
  std::string lhs_label;
  std::string rhs_label;
  double slack;
  bool pass;
  bool transitivity = false;
  bool informational = false;
};

struct InputsDigest {
  uint64_t seed = 0;
  uint64_t stream = 0;
  int dim = 0;
  std::vector<std::pair<std::string, double>> params;
  std::string fn_id;
  std::string map_id;
};

enum class Verdict { pass, fail, hypothesis_not_met };

struct ChainReport {
  std::string chain_id;
  InputsDigest digest;
  std::vector<LinkResult> links;
  std::vector<double> quad_errors;
  Verdict verdict = Verdict::pass;
  std::string unmet_hypothesis;  // set when verdict == hypothesis_not_met
};

// Registry access.  find_chain throws LookupError listing the known ids.
const std::vector<ChainSpec>& chain_registry();
const ChainSpec& find_chain(const std::string& id);

// Evaluates the chain on one input tuple.  Hypotheses run first and
// short-circuit to hypothesis_not_met.  Slack per relation kind:
//   loewner_chain  lambda_min(rhs - lhs),  pass >= -tol * max(1,|lhs|,|rhs|)
//   scalar_chain   rhs - lhs,              pass >= -tol * max(1,|lhs|,|rhs|)
//   equality       ||lhs-rhs||_F / scale,  pass <= tol
// Chains of three or more terms get an extra first-vs-last transitivity link.
ChainReport check_chain(const ChainSpec& spec, const Bindings& inputs, double tol,
                        const QuadratureSpec& quad);

}  // namespace opgeo
