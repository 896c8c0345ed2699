#include "opgeo/funcat.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "opgeo/errors.hpp"

namespace opgeo {

std::string to_string(FnFlag f) {
  switch (f) {
    case FnFlag::geometrically_convex: return "geometrically_convex";
    case FnFlag::operator_geometrically_convex: return "operator_geometrically_convex";
    case FnFlag::operator_convex: return "operator_convex";
    case FnFlag::convex: return "convex";
    case FnFlag::requires_contraction: return "requires_contraction";
  }
  return "?";
}

std::string FnDomain::to_string() const {
  const double inf = std::numeric_limits<double>::infinity();
  auto fmt = [inf](double x) -> std::string {
    if (x == inf) return "inf";
    if (x == -inf) return "-inf";
    std::ostringstream os;
    os << x;
    return os.str();
  };
  return std::string(open_lo ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + (open_hi ? ")" : "]");
}

ScalarFn make_poly_nonneg(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw ConfigError("poly_nonneg needs at least one coefficient");
  for (double c : coeffs) {
    if (!(c >= 0)) throw ConfigError("poly_nonneg coefficients must be nonnegative");
  }
  ScalarFn f;
  f.id = "poly_nonneg";
  f.eval = [coeffs](double x) {
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  };
  f.domain = {0.0, std::numeric_limits<double>::infinity(), true, true};
  f.flags = {FnFlag::geometrically_convex};
  return f;
}

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<ScalarFn> build_catalogue() {
  std::vector<ScalarFn> cat;

  cat.push_back({"inv",
                 [](double x) { return 1.0 / x; },
                 {0.0, kInf, true, true},
                 // Operator convexity of the inverse on (0, inf) admits it to
                 // the arithmetic-mean background chain as well.
                 {FnFlag::operator_geometrically_convex, FnFlag::operator_convex}});

  cat.push_back({"resolvent",
                 [](double x) { return 1.0 / (1.0 - x); },
                 {0.0, 1.0, true, true},
                 {FnFlag::operator_geometrically_convex, FnFlag::requires_contraction}});

  cat.push_back({"moebius",
                 [](double x) { return (1.0 + x) / (1.0 - x); },
                 {0.0, 1.0, true, true},
                 {FnFlag::operator_geometrically_convex, FnFlag::requires_contraction}});

  cat.push_back(make_poly_nonneg({1.0, 0.5, 0.25, 0.125}));

  cat.push_back({"exp",
                 [](double x) { return std::exp(x); },
                 {0.0, kInf, true, true},
                 {FnFlag::geometrically_convex, FnFlag::convex}});

  cat.push_back({"square",
                 [](double x) { return x * x; },
                 {-kInf, kInf, true, true},
                 {FnFlag::convex, FnFlag::operator_convex, FnFlag::geometrically_convex}});

  // Trivial controls: every chain that accepts them collapses to equality.
  cat.push_back({"identity",
                 [](double x) { return x; },
                 {0.0, kInf, true, true},
                 {FnFlag::operator_geometrically_convex, FnFlag::operator_convex,
                  FnFlag::geometrically_convex, FnFlag::convex}});

  cat.push_back({"one",
                 [](double) { return 1.0; },
                 {-kInf, kInf, true, true},
                 {FnFlag::operator_geometrically_convex, FnFlag::operator_convex,
                  FnFlag::geometrically_convex, FnFlag::convex}});

  return cat;
}

const std::vector<ScalarFn>& catalogue() {
  static const std::vector<ScalarFn> cat = build_catalogue();
  return cat;
}

}  // namespace

const ScalarFn& catalogue_fn(const std::string& id) {
  for (const ScalarFn& f : catalogue()) {
    if (f.id == id) return f;
  }
  std::string known;
  for (const ScalarFn& f : catalogue()) known += (known.empty() ? "" : ", ") + f.id;
  throw LookupError("unknown function '" + id + "'; known: " + known);
}

std::vector<std::string> catalogue_ids() {
  std::vector<std::string> ids;
  for (const ScalarFn& f : catalogue()) ids.push_back(f.id);
  return ids;
}

bool hypothesis_fA_leq_fB(const ScalarFn& f, const SymMatrix& a, const SymMatrix& b, double tol) {
  return loewner_leq(matrix_function(a, f), matrix_function(b, f), tol).ordered;
}

double scalar_geo_convexity_check(const ScalarFn& f, double a, double b, double lambda) {
  if (!f.domain.contains(a)) throw DomainError(f.id, a, f.domain.to_string());
  if (!f.domain.contains(b)) throw DomainError(f.id, b, f.domain.to_string());
  if (!(lambda >= 0 && lambda <= 1)) throw ConfigError("lambda must lie in [0,1]");
  const double mean = std::pow(a, lambda) * std::pow(b, 1.0 - lambda);
  if (!f.domain.contains(mean)) throw DomainError(f.id, mean, f.domain.to_string());
  return std::pow(f.eval(a), lambda) * std::pow(f.eval(b), 1.0 - lambda) - f.eval(mean);
}

PositiveLinearMap make_compression(const Matrix& v) {
  const int n = v.rows();
  const int k = v.cols();
  if (k > n) throw ConfigError("compression needs at most as many columns as rows");
  // Column rank check through the Gram matrix: full rank iff V^T V is PD.
  SymMatrix gram = sym_from_product(v.transposed() * v);
  SpectralDecomposition d = spectral_decompose(gram);
  if (!(d.eigenvalues.front() > 1e-12 * d.eigenvalues.back()))
    throw ConfigError("compression matrix is rank deficient");
  Matrix vt = v.transposed();
  return PositiveLinearMap{"compression", n, k, [vt](const SymMatrix& x) {
                             return congruence(vt, x);
                           }};
}

PositiveLinearMap make_diag_block(int input_dim, int k) {
  if (k < 1 || k > input_dim) throw ConfigError("diag_block size must lie in [1, input_dim]");
  return PositiveLinearMap{"diag_block", input_dim, k, [k](const SymMatrix& x) {
                             std::vector<double> e(static_cast<size_t>(k) * k);
                             for (int i = 0; i < k; ++i)
                               for (int j = 0; j < k; ++j) e[static_cast<size_t>(i) * k + j] = x(i, j);
                             return SymMatrix(k, e);
                           }};
}

PositiveLinearMap make_trace_map(int input_dim) {
  if (input_dim < 1) throw ConfigError("trace map needs input_dim >= 1");
  return PositiveLinearMap{"trace", input_dim, input_dim, [input_dim](const SymMatrix& x) {
                             return (x.trace() / input_dim) * SymMatrix::identity(input_dim);
                           }};
}

}  // namespace opgeo
