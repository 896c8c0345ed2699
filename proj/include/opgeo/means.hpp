#pragma once

#include "opgeo/linalg.hpp"

namespace opgeo {

// Weighted geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2} of two
// positive definite matrices.  Defined for every real t; t in [0,1] gives the
// interpolating mean, t=0 gives A and t=1 gives B.  Both operands must be
// positive definite: smallest eigenvalue above 1e-12 times the largest, else
// DefinitenessError.  A's square root and inverse square root come from a
// single decomposition.
SymMatrix gmean_t(const SymMatrix& a, const SymMatrix& b, double t);

// Midpoint case t = 1/2.
SymMatrix gmean(const SymMatrix& a, const SymMatrix& b);

}  // namespace opgeo
