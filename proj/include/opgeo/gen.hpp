#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "opgeo/linalg.hpp"
#include "opgeo/scalar_fn.hpp"

namespace opgeo {

// Counter-keyed splittable RNG.  The (seed, stream) pair fully determines the
// sequence, so per-trial streams can run in any order without coupling.
// Mixing is splitmix64's finalizer applied to seed and stream in turn.
class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream);

  uint64_t next_u64();
  double next_unit();  // [0, 1)
  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);  // lo > 0
  double gaussian();

 private:
  uint64_t state_;
  double spare_ = 0;
  bool has_spare_ = false;
};

struct GenConfig {
  uint64_t seed = 0;
  int dim = 2;
  double cond_max = 100.0;
  Interval spectrum_interval{0.1, 10.0};
  std::optional<double> norm_cap;  // required for contraction draws, in (0,1)

  void validate() const;  // throws ConfigError
};

// Orthogonal matrix from the QR factorization of a Gaussian draw, with the
// sign of R's diagonal fixed so the distribution is approximately Haar.
Matrix random_orthogonal(Rng& rng, int dim);

// Random symmetric matrix rescaled to unit operator norm.
SymMatrix random_symmetric_unit(Rng& rng, int dim);

// Random PSD perturbation with operator norm exactly `norm`.
SymMatrix random_psd(Rng& rng, int dim, double norm);

// Q diag(lambda) Q^T with log-uniform eigenvalues in cfg.spectrum_interval,
// redrawn until lambda_max/lambda_min <= cond_max.  Deterministic given
// (cfg.seed, stream).
SymMatrix random_spd(const GenConfig& cfg, uint64_t stream);
SymMatrix random_spd(Rng& rng, const GenConfig& cfg);

// random_spd rescaled so the operator norm is u * norm_cap, u uniform in
// [0.5, 1].  Requires cfg.norm_cap.
SymMatrix random_contraction_spd(const GenConfig& cfg, uint64_t stream);
SymMatrix random_contraction_spd(Rng& rng, const GenConfig& cfg);

// Two matrices sharing one random eigenbasis; they commute by construction.
std::pair<SymMatrix, SymMatrix> random_commuting_pair(const GenConfig& cfg, uint64_t stream);
std::pair<SymMatrix, SymMatrix> random_commuting_pair(Rng& rng, const GenConfig& cfg);

enum class PairStrategy { construct, reject };

// Pair (A, B) with f(A) <= f(B) in the Loewner order.
//
// construct: builds the pair so the predicate holds by algebra.  Which side
// gets the PSD bump depends on f: the inverse reverses order (draw B, return
// A = B + P); operator-monotone catalogue entries keep it (draw A, return
// B = A + P); square and exp are convex but not operator monotone, so the
// bump is applied on the image side and pulled back through f's inverse,
// B = f^{-1}(f(A) + P).
//
// reject: independent draws filtered by the predicate, 10^4-draw budget;
// exhaustion raises GenerationError suggesting the construct strategy.
std::pair<SymMatrix, SymMatrix> pair_with_hypothesis(const ScalarFn& f, const GenConfig& cfg,
                                                     PairStrategy strategy, uint64_t stream);
std::pair<SymMatrix, SymMatrix> pair_with_hypothesis(const ScalarFn& f, const GenConfig& cfg,
                                                     PairStrategy strategy, Rng& rng);

}  // namespace opgeo
