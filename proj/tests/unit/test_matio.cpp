// Text round-trip and parse diagnostics for the symmetric-matrix file format.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "opgeo/errors.hpp"
#include "opgeo/gen.hpp"
#include "opgeo/linalg.hpp"
#include "opgeo/matio.hpp"

using namespace opgeo;

namespace {

SymMatrix parse(const std::string& text, const std::string& name = "input") {
  std::istringstream in(text);
  return read_matrix(in, name);
}

std::string render(const SymMatrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  return out.str();
}

}  // namespace

TEST_SUITE("reading") {
  TEST_CASE("parses a plain 2x2 matrix") {
    SymMatrix m = parse("2\n1 0.5\n0.5 3\n");
    CHECK(m.dim() == 2);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.5);
    CHECK(m(1, 0) == 0.5);
    CHECK(m(1, 1) == 3.0);
  }

  TEST_CASE("tolerates blank and whitespace-only lines between records") {
    SymMatrix m = parse("\n  \t \n2\n\n1 0\n   \n0 4\n\n");
    CHECK(m.dim() == 2);
    CHECK(m(1, 1) == 4.0);
  }

  TEST_CASE("accepts scientific notation and negative entries") {
    SymMatrix m = parse("2\n1e-3 -2.5e2\n-2.5e2 7\n");
    CHECK(m(0, 0) == 1e-3);
    CHECK(m(0, 1) == -250.0);
  }

  TEST_CASE("dim 1 works") {
    SymMatrix m = parse("1\n42\n");
    CHECK(m.dim() == 1);
    CHECK(m(0, 0) == 42.0);
  }
}

TEST_SUITE("parse failures") {
  TEST_CASE("non-numeric dimension") {
    CHECK_THROWS_WITH_AS(parse("abc\n1\n"),
                         doctest::Contains("expected a positive matrix dimension"), ParseError);
    CHECK_THROWS_WITH_AS(parse("abc\n1\n", "m.mat"), doctest::Contains("m.mat:1:"), ParseError);
  }

  TEST_CASE("zero or negative dimension") {
    CHECK_THROWS_WITH_AS(parse("0\n"), doctest::Contains("positive matrix dimension"), ParseError);
    CHECK_THROWS_WITH_AS(parse("-3\n"), doctest::Contains("positive matrix dimension"), ParseError);
  }

  TEST_CASE("trailing token after the dimension") {
    CHECK_THROWS_WITH_AS(parse("2 2\n1 0\n0 1\n"), doctest::Contains("unexpected token '2'"),
                         ParseError);
  }

  TEST_CASE("absurdly large dimension is rejected before allocation") {
    CHECK_THROWS_WITH_AS(parse("999999\n"), doctest::Contains("unreasonably large"), ParseError);
  }

  TEST_CASE("row with too few entries reports the row and line") {
    // Row 2 is line 3 of the input.
    CHECK_THROWS_WITH_AS(parse("2\n1 0\n0\n", "short.mat"),
                         doctest::Contains("row 2 has fewer than 2 entries"), ParseError);
    CHECK_THROWS_WITH_AS(parse("2\n1 0\n0\n", "short.mat"), doctest::Contains("short.mat:3:"),
                         ParseError);
  }

  TEST_CASE("row with too many entries") {
    CHECK_THROWS_WITH_AS(parse("2\n1 0 0\n0 1\n"),
                         doctest::Contains("row 1 has more than 2 entries"), ParseError);
  }

  TEST_CASE("truncated input reports what was expected") {
    CHECK_THROWS_WITH_AS(parse("3\n1 0 0\n0 1 0\n"),
                         doctest::Contains("unexpected end of input, expected matrix row 3"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("expected dimension"), ParseError);
  }

  TEST_CASE("grossly asymmetric entries surface as a parse error with location") {
    CHECK_THROWS_WITH_AS(parse("2\n1 5\n2 3\n", "bad.mat"), doctest::Contains("not symmetric"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse("2\n1 5\n2 3\n", "bad.mat"), doctest::Contains("bad.mat:3:"),
                         ParseError);
  }

  TEST_CASE("missing file names the path") {
    CHECK_THROWS_WITH_AS(read_matrix_file("/nonexistent/of/course.mat"),
                         doctest::Contains("cannot open for reading"), ParseError);
  }
}

TEST_SUITE("round trip") {
  TEST_CASE("write then read reproduces every entry bit for bit") {
    // %.17g is enough digits to reconstruct any double exactly.
    Rng rng(7, 0);
    GenConfig cfg;
    cfg.spectrum_interval = Interval{1e-6, 1e6};
    cfg.cond_max = 1e12;
    for (int dim : {1, 2, 3, 5, 8}) {
      cfg.dim = dim;
      SymMatrix a = random_spd(rng, cfg);
      SymMatrix b = parse(render(a));
      REQUIRE(b.dim() == a.dim());
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) CHECK(b(i, j) == a(i, j));
    }
  }

  TEST_CASE("awkward magnitudes round trip exactly") {
    SymMatrix a(2, {1.0 / 3.0, -2.2250738585072014e-308, -2.2250738585072014e-308,
                    1.7976931348623157e308});
    SymMatrix b = parse(render(a));
    CHECK(b(0, 0) == a(0, 0));
    CHECK(b(0, 1) == a(0, 1));
    CHECK(b(1, 1) == a(1, 1));
  }

  TEST_CASE("file-level round trip") {
    std::string path = "matio_roundtrip_tmp.mat";
    SymMatrix a(2, {2.3145502494313788, 0.46291004988627571, 0.46291004988627571,
                    1.3887301496588271});
    write_matrix_file(path, a);
    SymMatrix b = read_matrix_file(path);
    std::remove(path.c_str());
    CHECK(b(0, 0) == a(0, 0));
    CHECK(b(0, 1) == a(0, 1));
    CHECK(b(1, 1) == a(1, 1));
  }
}
