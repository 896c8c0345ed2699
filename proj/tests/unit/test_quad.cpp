// Gauss-Legendre rule construction and adaptive matrix-valued integration.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "opgeo/errors.hpp"
#include "opgeo/gen.hpp"
#include "opgeo/linalg.hpp"
#include "opgeo/means.hpp"
#include "opgeo/quad.hpp"

using namespace opgeo;

namespace {

double dist(const SymMatrix& x, const SymMatrix& y) { return (x - y).frobenius_norm(); }

SymMatrix integral01(const std::function<SymMatrix(double)>& g, const QuadratureSpec& spec = {}) {
  return integrate_matrix(g, 0.0, 1.0, spec).value;
}

}  // namespace

TEST_SUITE("rule construction") {
  TEST_CASE("order 2 is the textbook two-point rule") {
    GaussLegendreRule r = gauss_legendre(2);
    REQUIRE(r.nodes.size() == 2);
    REQUIRE(r.weights.size() == 2);
    double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    CHECK(r.nodes[0] == doctest::Approx(-inv_sqrt3).epsilon(1e-14));
    CHECK(r.nodes[1] == doctest::Approx(inv_sqrt3).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("weights sum to 2 and nodes are symmetric for every order") {
    for (int n : {2, 3, 5, 8, 16, 32}) {
      GaussLegendreRule r = gauss_legendre(n);
      REQUIRE(static_cast<int>(r.nodes.size()) == n);
      double wsum = 0;
      for (double w : r.weights) {
        CHECK(w > 0);
        wsum += w;
      }
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
      for (int i = 0; i < n; ++i) {
        CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-13));
        if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
      }
    }
  }

  TEST_CASE("order n integrates monomials up to degree 2n-1 exactly") {
    for (int n : {2, 4, 7}) {
      GaussLegendreRule r = gauss_legendre(n);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double acc = 0;
        for (size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], d);
        // Integral of x^d over [-1, 1]: 0 for odd d, 2/(d+1) for even d.
        double exact = (d % 2) ? 0.0 : 2.0 / (d + 1);
        CHECK(acc == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
      }
      // ...and x^(2n) is NOT integrated exactly, so the order claim is sharp.
      double acc = 0;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * std::pow(r.nodes[i], 2 * n);
      CHECK(std::abs(acc - 2.0 / (2 * n + 1)) > 1e-8);
    }
  }

  TEST_CASE("orders below 2 are rejected") {
    CHECK_THROWS_AS(gauss_legendre(1), ConfigError);
    CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
    CHECK_THROWS_AS(gauss_legendre(-4), ConfigError);
  }
}

TEST_SUITE("matrix integration") {
  TEST_CASE("linear integrand t*A integrates to A/2 essentially exactly") {
    SymMatrix a(2, {3, 1, 1, 2});
    SymMatrix got = integral01([&](double t) { return t * a; });
    CHECK(dist(got, 0.5 * a) <= 1e-14);
  }

  TEST_CASE("scalar weighted geometric path from 1 to 4 integrates to the logarithmic mean") {
    // integral over [0,1] of 4^t dt = 3 / log 4.
    SymMatrix one = SymMatrix::identity(1);
    SymMatrix four(1, {4.0});
    SymMatrix got = integral01([&](double t) { return gmean_t(one, four, t); });
    CHECK(got(0, 0) == doctest::Approx(3.0 / std::log(4.0)).epsilon(1e-12));
  }

  TEST_CASE("integration is linear in the integrand") {
    GenConfig cfg;
    cfg.seed = 31;
    cfg.dim = 3;
    Rng rng(cfg.seed, 0);
    SymMatrix a = random_spd(rng, cfg);
    SymMatrix b = random_spd(rng, cfg);
    auto f = [&](double t) { return gmean_t(a, b, t); };
    auto g = [&](double t) { return std::exp(t) * a; };
    SymMatrix lhs = integral01([&](double t) { return f(t) + 2.0 * g(t); });
    SymMatrix rhs = integral01(f) + 2.0 * integral01(g);
    double scale = std::max({1.0, lhs.frobenius_norm(), rhs.frobenius_norm()});
    CHECK(dist(lhs, rhs) <= 1e-12 * scale);
  }

  TEST_CASE("reflecting the parameter leaves the integral unchanged") {
    GenConfig cfg;
    cfg.seed = 32;
    cfg.dim = 4;
    Rng rng(cfg.seed, 1);
    SymMatrix a = random_spd(rng, cfg);
    SymMatrix b = random_spd(rng, cfg);
    QuadratureSpec spec;
    SymMatrix fwd = integral01([&](double t) { return gmean_t(a, b, t); }, spec);
    SymMatrix rev = integral01([&](double t) { return gmean_t(a, b, 1.0 - t); }, spec);
    CHECK(dist(fwd, rev) <= 2 * spec.abs_tol);
  }

  TEST_CASE("pointwise order of integrands is preserved by the integral") {
    GenConfig cfg;
    cfg.seed = 33;
    cfg.dim = 3;
    QuadratureSpec spec;
    for (uint64_t stream = 0; stream < 5; ++stream) {
      Rng rng(cfg.seed, stream);
      SymMatrix a = random_spd(rng, cfg);
      SymMatrix p = random_psd(rng, cfg.dim, 1.0);
      SymMatrix lo = integral01([&](double t) { return std::exp(t) * a; }, spec);
      SymMatrix hi = integral01([&](double t) { return std::exp(t) * a + t * p; }, spec);
      CHECK(loewner_leq(lo, hi, 2 * spec.abs_tol).ordered);
    }
  }

  TEST_CASE("general interval: integral of t*I over [1, 3] is 4*I") {
    SymMatrix got = integrate_matrix([](double t) { return t * SymMatrix::identity(2); }, 1.0, 3.0,
                                     QuadratureSpec{})
                        .value;
    CHECK(dist(got, 4.0 * SymMatrix::identity(2)) <= 1e-13);
  }

  TEST_CASE("error estimate is reported and small for smooth integrands") {
    SymMatrix a(2, {2, 1, 1, 2});
    QuadResult r = integrate_matrix([&](double t) { return std::exp(t) * a; }, 0.0, 1.0,
                                    QuadratureSpec{});
    CHECK(r.err_estimate >= 0.0);
    CHECK(r.err_estimate <= 1e-11);
  }

  TEST_CASE("refinement budget exhaustion on a singular integrand raises AccuracyError") {
    // 1/sqrt(t) is integrable but unbounded at 0; a starved budget cannot
    // reach 1e-15.
    QuadratureSpec starved;
    starved.base_order = 2;
    starved.max_refinements = 1;
    starved.abs_tol = 1e-15;
    auto g = [](double t) { return (1.0 / std::sqrt(t)) * SymMatrix::identity(1); };
    CHECK_THROWS_AS(integrate_matrix(g, 0.0, 1.0, starved), AccuracyError);
    try {
      integrate_matrix(g, 0.0, 1.0, starved);
    } catch (const AccuracyError& e) {
      CHECK(e.estimate() > 10 * starved.abs_tol);
    }
  }

  TEST_CASE("degenerate and reversed intervals are configuration errors") {
    auto g = [](double t) { return t * SymMatrix::identity(1); };
    CHECK_THROWS_AS(integrate_matrix(g, 1.0, 1.0, QuadratureSpec{}), ConfigError);
    CHECK_THROWS_AS(integrate_matrix(g, 2.0, 1.0, QuadratureSpec{}), ConfigError);
  }

  TEST_CASE("invalid specs are configuration errors") {
    auto g = [](double t) { return t * SymMatrix::identity(1); };
    QuadratureSpec bad_order;
    bad_order.base_order = 1;
    CHECK_THROWS_AS(integrate_matrix(g, 0.0, 1.0, bad_order), ConfigError);
    QuadratureSpec bad_refine;
    bad_refine.max_refinements = -1;
    CHECK_THROWS_AS(integrate_matrix(g, 0.0, 1.0, bad_refine), ConfigError);
    QuadratureSpec bad_tol;
    bad_tol.abs_tol = 0.0;
    CHECK_THROWS_AS(integrate_matrix(g, 0.0, 1.0, bad_tol), ConfigError);
  }
}

TEST_SUITE("scalar integration") {
  TEST_CASE("smooth integrand reaches the analytic value and a tiny estimate") {
    ScalarQuadResult r =
        integrate_scalar([](double t) { return std::exp(t); }, 0.0, 1.0, QuadratureSpec{});
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) <= 1e-13);
    CHECK(r.err_estimate >= 0.0);
    CHECK(r.err_estimate <= 1e-11);
  }

  TEST_CASE("kinked integrand |t - 1/3| is integrated to full accuracy") {
    // Uniform refinement stalls on a C0 kink; local bisection must not.
    ScalarQuadResult r = integrate_scalar([](double t) { return std::abs(t - 1.0 / 3.0); }, 0.0,
                                          1.0, QuadratureSpec{});
    CHECK(std::abs(r.value - 5.0 / 18.0) <= 1e-11);
    CHECK(r.err_estimate <= 1e-11);
  }

  TEST_CASE("crossing of two smooth branches, as in a norm along a matrix path") {
    ScalarQuadResult r = integrate_scalar([](double t) { return std::max(t, 1.0 - t); }, 0.0, 1.0,
                                          QuadratureSpec{});
    CHECK(std::abs(r.value - 0.75) <= 1e-11);
  }

  TEST_CASE("integrable singularity exhausts even the local budget") {
    auto g = [](double t) { return 1.0 / std::sqrt(t); };
    CHECK_THROWS_AS(integrate_scalar(g, 0.0, 1.0, QuadratureSpec{}), AccuracyError);
  }

  TEST_CASE("interval and spec validation mirrors the matrix integrator") {
    auto g = [](double t) { return t; };
    CHECK_THROWS_AS(integrate_scalar(g, 1.0, 1.0, QuadratureSpec{}), ConfigError);
    CHECK_THROWS_AS(integrate_scalar(g, 2.0, 1.0, QuadratureSpec{}), ConfigError);
    QuadratureSpec bad_order;
    bad_order.base_order = 0;
    CHECK_THROWS_AS(integrate_scalar(g, 0.0, 1.0, bad_order), ConfigError);
    QuadratureSpec bad_tol;
    bad_tol.abs_tol = -1.0;
    CHECK_THROWS_AS(integrate_scalar(g, 0.0, 1.0, bad_tol), ConfigError);
  }
}
