#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opgeo/linalg.hpp"
#include "opgeo/scalar_fn.hpp"

namespace opgeo {

// Catalogue of scalar functions the chain registry can draw on:
//
//   inv         1/x            on (0, inf)
//   resolvent   1/(1-x)        on (-inf, 1), meant for contractions
//   moebius     (1+x)/(1-x)    on (-inf, 1), meant for contractions
//   poly_nonneg 1 + x/2 + x^2/4 + x^3/8   on [0, inf)
//   exp         e^x            on (0, inf) here (positivity keeps it usable
//                              in multiplicative chains)
//   square      x^2            on (-inf, inf)
//   identity    x              on (0, inf)
//   one         1              on (-inf, inf)
//
// Lookup throws LookupError listing the known ids.
const ScalarFn& catalogue_fn(const std::string& id);
std::vector<std::string> catalogue_ids();

// Polynomial with nonnegative coefficients c0 + c1 x + ... on [0, inf).
// Rejects empty or negative coefficient lists.
ScalarFn make_poly_nonneg(const std::vector<double>& coeffs);

// Whether f(A) <= f(B) in the positive semidefinite order at tolerance tol.
bool hypothesis_fA_leq_fB(const ScalarFn& f, const SymMatrix& a, const SymMatrix& b, double tol);

// Multiplicative-convexity slack f(a)^lambda f(b)^(1-lambda) -
// f(a^lambda b^(1-lambda)); nonnegative when f is geometrically convex.
double scalar_geo_convexity_check(const ScalarFn& f, double a, double b, double lambda);

// Unital-free positive linear map on symmetric matrices of a fixed input
// dimension.
struct PositiveLinearMap {
  std::string id;
  int input_dim;
  int output_dim;
  std::function<SymMatrix(const SymMatrix&)> apply;
};

// V^T X V for a full-column-rank V (input_dim x k).  Rank deficiency is a
// ConfigError.
PositiveLinearMap make_compression(const Matrix& v);

// Leading k x k principal block.
PositiveLinearMap make_diag_block(int input_dim, int k);

// (tr X / n) * I_n.
PositiveLinearMap make_trace_map(int input_dim);

}  // namespace opgeo
