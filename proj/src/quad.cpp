#include "opgeo/quad.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "opgeo/errors.hpp"

namespace opgeo {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 2) throw ConfigError("Gauss-Legendre order must be at least 2");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration from the Chebyshev-angle initial guess; each root of
  // P_n is simple and well separated, so a handful of steps reaches machine
  // precision.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact center for odd orders
  return rule;
}

namespace {

SymMatrix composite(const std::function<SymMatrix(double)>& g, double a, double b, int panels,
                    const GaussLegendreRule& rule) {
  const double h = (b - a) / panels;
  SymMatrix acc = SymMatrix::zero(1);
  bool first = true;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + 0.5 * h * rule.nodes[i];
      SymMatrix v = (0.5 * h * rule.weights[i]) * g(x);
      if (first) {
        acc = v;
        first = false;
      } else {
        acc = acc + v;
      }
    }
  }
  return acc;
}

}  // namespace

QuadResult integrate_matrix(const std::function<SymMatrix(double)>& g, double a, double b,
                            const QuadratureSpec& spec) {
  if (!(a < b)) throw ConfigError("integrate_matrix requires a < b");
  if (spec.base_order < 2) throw ConfigError("QuadratureSpec.base_order must be at least 2");
  if (spec.max_refinements < 1) throw ConfigError("QuadratureSpec.max_refinements must be >= 1");
  if (!(spec.abs_tol > 0)) throw ConfigError("QuadratureSpec.abs_tol must be positive");

  const GaussLegendreRule rule = gauss_legendre(spec.base_order);

  SymMatrix prev = composite(g, a, b, 1, rule);
  double err = std::numeric_limits<double>::infinity();
  int panels = 1;
  for (int r = 0; r < spec.max_refinements; ++r) {
    panels *= 2;
    SymMatrix cur = composite(g, a, b, panels, rule);
    err = (cur - prev).frobenius_norm();
    prev = cur;
    if (err <= spec.abs_tol) return QuadResult{prev, err};
  }
  if (err > 10.0 * spec.abs_tol) throw AccuracyError(err, spec.abs_tol);
  return QuadResult{prev, err};
}

namespace {

double panel_sum(const std::function<double(double)>& g, double lo, double hi,
                 const GaussLegendreRule& rule) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += half * rule.weights[i] * g(mid + half * rule.nodes[i]);
  }
  return acc;
}

struct ScalarPanelWork {
  const std::function<double(double)>& g;
  const GaussLegendreRule& rule;
  double tol_per_width;  // abs_tol / (b - a)
  int depth_cap;
  double value = 0.0;
  double err = 0.0;

  // `whole` is the one-panel estimate for [lo, hi], already computed by the
  // caller so each point of the recursion tree is integrated exactly once at
  // its own level.
  void visit(double lo, double hi, double whole, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = panel_sum(g, lo, mid, rule);
    const double right = panel_sum(g, mid, hi, rule);
    const double discrepancy = std::abs(left + right - whole);
    if (discrepancy <= tol_per_width * (hi - lo) || depth >= depth_cap) {
      value += left + right;
      err += discrepancy;
      return;
    }
    visit(lo, mid, left, depth + 1);
    visit(mid, hi, right, depth + 1);
  }
};

}  // namespace

ScalarQuadResult integrate_scalar(const std::function<double(double)>& g, double a, double b,
                                  const QuadratureSpec& spec) {
  if (!(a < b)) throw ConfigError("integrate_scalar requires a < b");
  if (spec.base_order < 2) throw ConfigError("QuadratureSpec.base_order must be at least 2");
  if (spec.max_refinements < 1) throw ConfigError("QuadratureSpec.max_refinements must be >= 1");
  if (!(spec.abs_tol > 0)) throw ConfigError("QuadratureSpec.abs_tol must be positive");

  const GaussLegendreRule rule = gauss_legendre(spec.base_order);
  ScalarPanelWork work{g, rule, spec.abs_tol / (b - a), spec.max_refinements + 24};
  work.visit(a, b, panel_sum(g, a, b, rule), 0);
  if (work.err > 10.0 * spec.abs_tol) throw AccuracyError(work.err, spec.abs_tol);
  return ScalarQuadResult{work.value, work.err};
}

}  // namespace opgeo
