#include "opgeo/matio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "opgeo/errors.hpp"

namespace opgeo {

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SymMatrix read_matrix(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;

  auto next_line = [&](const std::string& expect) -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      // Allow blank lines between records; entries never span lines.
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    fail(name, lineno + 1, "unexpected end of input, expected " + expect);
  };

  std::istringstream head(next_line("dimension"));
  long dim = 0;
  if (!(head >> dim) || dim < 1) fail(name, lineno, "expected a positive matrix dimension");
  std::string extra;
  if (head >> extra) fail(name, lineno, "unexpected token '" + extra + "' after dimension");
  if (dim > 4096) fail(name, lineno, "dimension " + std::to_string(dim) + " is unreasonably large");

  std::vector<double> entries;
  entries.reserve(static_cast<size_t>(dim) * dim);
  for (long r = 0; r < dim; ++r) {
    std::istringstream row(next_line("matrix row " + std::to_string(r + 1)));
    for (long c = 0; c < dim; ++c) {
      double v;
      if (!(row >> v))
        fail(name, lineno, "row " + std::to_string(r + 1) + " has fewer than " +
                               std::to_string(dim) + " entries");
      entries.push_back(v);
    }
    if (row >> extra)
      fail(name, lineno, "row " + std::to_string(r + 1) + " has more than " +
                             std::to_string(dim) + " entries");
  }

  try {
    return SymMatrix(static_cast<int>(dim), entries);
  } catch (const Error& e) {
    fail(name, lineno, e.what());
  }
}

SymMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const SymMatrix& m) {
  out << m.dim() << "\n";
  char buf[40];
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
}

void write_matrix_file(const std::string& path, const SymMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  write_matrix(out, m);
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace opgeo
