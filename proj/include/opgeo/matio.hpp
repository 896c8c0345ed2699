#pragma once

#include <iosfwd>
#include <string>

#include "opgeo/linalg.hpp"

namespace opgeo {

// Matrix text format, shared by the CLI and the fixtures: first line the
// dimension, then dim lines of dim whitespace-separated decimal entries.
// Writing uses 17 significant digits so values round-trip exactly.

SymMatrix read_matrix(std::istream& in, const std::string& name = "<stream>");
SymMatrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const SymMatrix& m);
void write_matrix_file(const std::string& path, const SymMatrix& m);

}  // namespace opgeo
