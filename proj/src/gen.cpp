#include "opgeo/gen.hpp"

#include <cmath>
#include <numbers>

#include "opgeo/errors.hpp"
#include "opgeo/funcat.hpp"

namespace opgeo {

namespace {

// splitmix64 finalizer.
uint64_t mix(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr int kRejectBudget = 10'000;

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
  // Feeding the mixed seed and stream through the finalizer twice decorrelates
  // neighbouring (seed, stream) pairs.
  state_ = mix(mix(seed) ^ mix(stream ^ 0xD1B54A32D192ED03ull));
}

uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

double Rng::log_uniform(double lo, double hi) {
  if (!(lo > 0) || !(hi >= lo)) throw ConfigError("log_uniform requires 0 < lo <= hi");
  if (lo == hi) return lo;
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; the first factor must avoid log(0).
  double u1 = 0.0;
  do {
    u1 = next_unit();
  } while (u1 == 0.0);
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

void GenConfig::validate() const {
  if (dim < 1) throw ConfigError("GenConfig.dim must be at least 1");
  if (!(cond_max >= 1)) throw ConfigError("GenConfig.cond_max must be at least 1");
  if (!(spectrum_interval.lo > 0)) throw ConfigError("GenConfig.spectrum_interval must be positive");
  if (norm_cap && !(*norm_cap > 0 && *norm_cap < 1))
    throw ConfigError("GenConfig.norm_cap must lie in (0,1)");
}

Matrix random_orthogonal(Rng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.at(i, j) = rng.gaussian();

  // Householder QR, accumulating Q explicitly.
  Matrix q = Matrix::identity(dim);
  for (int col = 0; col < dim; ++col) {
    double norm = 0.0;
    for (int i = col; i < dim; ++i) norm += g.at(i, col) * g.at(i, col);
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      // Degenerate Gaussian column: measure zero, but keep going safely.
      g.at(col, col) = 1.0;
      norm = 1.0;
    }
    const double alpha = g.at(col, col) >= 0 ? -norm : norm;
    std::vector<double> v(dim, 0.0);
    v[col] = g.at(col, col) - alpha;
    for (int i = col + 1; i < dim; ++i) v[i] = g.at(i, col);
    double vsq = 0.0;
    for (int i = col; i < dim; ++i) vsq += v[i] * v[i];
    if (vsq == 0.0) continue;

    auto reflect = [&](Matrix& m) {
      for (int j = 0; j < dim; ++j) {
        double dot = 0.0;
        for (int i = col; i < dim; ++i) dot += v[i] * m.at(i, j);
        const double f = 2.0 * dot / vsq;
        for (int i = col; i < dim; ++i) m.at(i, j) -= f * v[i];
      }
    };
    reflect(g);
    reflect(q);
  }
  // q now holds H_k ... H_1, so Q = q^T; flip columns where R's diagonal is
  // negative so the map from Gaussians is unique (approximately Haar).
  Matrix out = q.transposed();
  for (int j = 0; j < dim; ++j) {
    if (g.at(j, j) < 0)
      for (int i = 0; i < dim; ++i) out.at(i, j) = -out.at(i, j);
  }
  return out;
}

SymMatrix random_symmetric_unit(Rng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.at(i, j) = rng.gaussian();
  SymMatrix h = sym_from_product(g);  // averages with the transpose
  const double norm = operator_norm(h);
  if (norm == 0.0) return SymMatrix::identity(dim);  // measure-zero fallback
  return (1.0 / norm) * h;
}

SymMatrix random_psd(Rng& rng, int dim, double norm) {
  if (!(norm >= 0)) throw ConfigError("random_psd norm must be nonnegative");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g.at(i, j) = rng.gaussian();
  SymMatrix p = sym_from_product(g * g.transposed());
  const double top = operator_norm(p);
  if (top == 0.0) return norm * SymMatrix::identity(dim);
  return (norm / top) * p;
}

SymMatrix random_spd(Rng& rng, const GenConfig& cfg) {
  cfg.validate();
  const double lo = cfg.spectrum_interval.lo;
  const double hi = cfg.spectrum_interval.hi;

  std::vector<double> lam(cfg.dim);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= kRejectBudget)
      throw ConfigError("random_spd: spectrum_interval and cond_max admit no draw (none of " +
                        std::to_string(kRejectBudget) + " attempts landed within cond_max)");
    double mn = hi, mx = lo;
    for (int i = 0; i < cfg.dim; ++i) {
      lam[i] = rng.log_uniform(lo, hi);
      mn = std::min(mn, lam[i]);
      mx = std::max(mx, lam[i]);
    }
    if (mx <= cfg.cond_max * mn) break;
  }

  if (cfg.dim == 1) return SymMatrix::diagonal(lam);
  Matrix q = random_orthogonal(rng, cfg.dim);
  return congruence(q, SymMatrix::diagonal(lam));
}

SymMatrix random_spd(const GenConfig& cfg, uint64_t stream) {
  Rng rng(cfg.seed, stream);
  return random_spd(rng, cfg);
}

SymMatrix random_contraction_spd(Rng& rng, const GenConfig& cfg) {
  cfg.validate();
  if (!cfg.norm_cap) throw ConfigError("random_contraction_spd requires norm_cap");
  SymMatrix base = random_spd(rng, cfg);
  const double u = rng.uniform(0.5, 1.0);
  const double target = u * *cfg.norm_cap;
  return (target / operator_norm(base)) * base;
}

SymMatrix random_contraction_spd(const GenConfig& cfg, uint64_t stream) {
  Rng rng(cfg.seed, stream);
  return random_contraction_spd(rng, cfg);
}

std::pair<SymMatrix, SymMatrix> random_commuting_pair(Rng& rng, const GenConfig& cfg) {
  cfg.validate();
  auto draw_spectrum = [&] {
    std::vector<double> lam(cfg.dim);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kRejectBudget)
        throw ConfigError("random_commuting_pair: spectrum_interval and cond_max admit no draw");
      double mn = cfg.spectrum_interval.hi, mx = cfg.spectrum_interval.lo;
      for (int i = 0; i < cfg.dim; ++i) {
        lam[i] = rng.log_uniform(cfg.spectrum_interval.lo, cfg.spectrum_interval.hi);
        mn = std::min(mn, lam[i]);
        mx = std::max(mx, lam[i]);
      }
      if (mx <= cfg.cond_max * mn) return lam;
    }
  };
  std::vector<double> la = draw_spectrum();
  std::vector<double> lb = draw_spectrum();
  if (cfg.dim == 1) return {SymMatrix::diagonal(la), SymMatrix::diagonal(lb)};
  Matrix q = random_orthogonal(rng, cfg.dim);
  return {congruence(q, SymMatrix::diagonal(la)), congruence(q, SymMatrix::diagonal(lb))};
}

std::pair<SymMatrix, SymMatrix> random_commuting_pair(const GenConfig& cfg, uint64_t stream) {
  Rng rng(cfg.seed, stream);
  return random_commuting_pair(rng, cfg);
}

namespace {

// Monotone pull-back map: given f(A) and a PSD bump P, returns B with
// f(B) = f(A) + P exactly (up to the eigensolver), so the hypothesis holds by
// construction even for functions that are not operator monotone.
SymMatrix pull_back(const std::string& fn_id, const SymMatrix& image) {
  SpectralDecomposition d = spectral_decompose(image);
  if (fn_id == "square") {
    // x^2 is invertible on the positive branch.
    if (!(d.eigenvalues.front() > 0)) throw GenerationError("square pull-back needs a PD image");
    return d.apply([](double y) { return std::sqrt(y); });
  }
  if (fn_id == "exp") {
    if (!(d.eigenvalues.front() > 0)) throw GenerationError("exp pull-back needs a PD image");
    return d.apply([](double y) { return std::log(y); });
  }
  throw GenerationError("no pull-back registered for function '" + fn_id + "'");
}

}  // namespace

std::pair<SymMatrix, SymMatrix> pair_with_hypothesis(const ScalarFn& f, const GenConfig& cfg,
                                                     PairStrategy strategy, Rng& rng) {
  cfg.validate();
  const bool contraction = f.has(FnFlag::requires_contraction);
  auto draw = [&] { return contraction ? random_contraction_spd(rng, cfg) : random_spd(rng, cfg); };

  if (strategy == PairStrategy::reject) {
    for (int attempt = 0; attempt < kRejectBudget; ++attempt) {
      SymMatrix a = draw();
      SymMatrix b = draw();
      if (hypothesis_fA_leq_fB(f, a, b, 0.0)) return {a, b};
    }
    throw GenerationError("pair_with_hypothesis: rejection budget exhausted for '" + f.id +
                          "'; the construct strategy is reliable here");
  }

  if (f.id == "inv") {
    // The inverse reverses order: B <= A gives f(A) <= f(B).
    SymMatrix b = draw();
    const double bump = rng.uniform(0.0, 0.5) * operator_norm(b);
    SymMatrix p = random_psd(rng, cfg.dim, bump);
    return {b + p, b};
  }

  if (f.id == "square" || f.id == "exp") {
    SymMatrix a = draw();
    SymMatrix fa = matrix_function(a, f);
    const double bump = rng.uniform(0.0, 0.5) * operator_norm(fa);
    SymMatrix p = random_psd(rng, cfg.dim, bump);
    return {a, pull_back(f.id, fa + p)};
  }

  if (contraction) {
    // Shrink towards zero from a contraction draw; catalogue entries with
    // this flag are increasing on (0,1), so A = B - P keeps f(A) <= f(B),
    // and the subtraction is capped to preserve positive definiteness.
    SymMatrix b = draw();
    SpectralDecomposition d = spectral_decompose(b);
    const double margin = 0.8 * d.eigenvalues.front();
    SymMatrix p = random_psd(rng, cfg.dim, rng.uniform(0.0, margin));
    return {b - p, b};
  }

  // Remaining catalogue entries (identity, one, resolvent-free monotone
  // cases) are operator monotone, so the bump stays on the input side.
  SymMatrix a = draw();
  const double bump = rng.uniform(0.0, 0.5) * operator_norm(a);
  SymMatrix p = random_psd(rng, cfg.dim, bump);
  return {a, a + p};
}

std::pair<SymMatrix, SymMatrix> pair_with_hypothesis(const ScalarFn& f, const GenConfig& cfg,
                                                     PairStrategy strategy, uint64_t stream) {
  Rng rng(cfg.seed, stream);
  return pair_with_hypothesis(f, cfg, strategy, rng);
}

}  // namespace opgeo
