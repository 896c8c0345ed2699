#pragma once

#include <functional>
#include <vector>

#include "opgeo/linalg.hpp"

namespace opgeo {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Computes the order-n rule by Newton iteration on the Legendre polynomial.
// Throws ConfigError for n < 2.
GaussLegendreRule gauss_legendre(int n);

struct QuadratureSpec {
  int base_order = 16;
  int max_refinements = 6;
  double abs_tol = 1e-11;
};

struct QuadResult {
  SymMatrix value;
  double err_estimate;
};

// Integrates a matrix-valued function over [a, b] with a composite
// Gauss-Legendre rule.  Starting from one panel, the panel count doubles
// until consecutive approximations agree to abs_tol in Frobenius norm or
// max_refinements bisections have been spent; err_estimate is the last
// successive-refinement distance.  Throws AccuracyError when the budget runs
// out with the estimate still above 10 * abs_tol, and ConfigError for an
// invalid spec or a >= b.
QuadResult integrate_matrix(const std::function<SymMatrix(double)>& g, double a, double b,
                            const QuadratureSpec& spec);

struct ScalarQuadResult {
  double value;
  double err_estimate;
};

// Integrates a scalar function over [a, b] with locally adaptive panel
// bisection: a panel is accepted when the discrepancy between its one-panel
// Gauss-Legendre estimate (base_order nodes) and the two-half estimate fits
// the panel's proportional share of abs_tol, otherwise the halves recurse.
// Local adaptivity handles integrands that are only piecewise smooth (an
// operator norm along an analytic matrix path can have kinks at eigenvalue
// crossings); bisection depth is capped at max_refinements + 24.
// err_estimate sums the accepted discrepancies.  Throws AccuracyError when
// the total estimate exceeds 10 * abs_tol, and ConfigError for an invalid
// spec or a >= b.
ScalarQuadResult integrate_scalar(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureSpec& spec);

}  // namespace opgeo
