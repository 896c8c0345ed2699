#pragma once

#include <functional>
#include <limits>
#include <set>
#include <string>

namespace opgeo {

// Structural properties a catalogue function may carry.  Chains use these to
// decide which functions they accept; the generator uses requires_contraction
// to cap the spectra of the matrices it draws.
enum class FnFlag {
  geometrically_convex,
  operator_geometrically_convex,
  operator_convex,
  convex,
  requires_contraction,
};

std::string to_string(FnFlag f);

// Domain of a scalar function, with open/closed endpoints.  Infinite
// endpoints use +/-infinity.
struct FnDomain {
  double lo;
  double hi;
  bool open_lo = false;
  bool open_hi = false;

  bool contains(double x) const {
    if (open_lo ? !(x > lo) : !(x >= lo)) return false;
    if (open_hi ? !(x < hi) : !(x <= hi)) return false;
    return true;
  }

  std::string to_string() const;
};

// A scalar function together with the metadata needed to lift it to symmetric
// matrices and to route it into inequality chains.
struct ScalarFn {
  std::string id;
  std::function<double(double)> eval;
  FnDomain domain{-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  std::set<FnFlag> flags;

  bool has(FnFlag f) const { return flags.count(f) != 0; }
};

}  // namespace opgeo
