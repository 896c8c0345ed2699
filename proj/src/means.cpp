#include "opgeo/means.hpp"

#include <cmath>

#include "opgeo/errors.hpp"

namespace opgeo {

namespace {

// PD gate shared by both operands: smallest eigenvalue must clear a relative
// floor so near-singular inputs fail loudly instead of amplifying roundoff.
void check_pd(const SpectralDecomposition& d, const std::string& operand) {
  const double lo = d.eigenvalues.front();
  const double hi = d.eigenvalues.back();
  if (!(lo > 1e-12 * hi) || !(hi > 0)) throw DefinitenessError(operand, lo);
}

}  // namespace

SymMatrix gmean_t(const SymMatrix& a, const SymMatrix& b, double t) {
  if (a.dim() != b.dim())
    throw DimensionError("gmean_t dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));

  SpectralDecomposition da = spectral_decompose(a);
  check_pd(da, "A");
  SpectralDecomposition db = spectral_decompose(b);
  check_pd(db, "B");

  // One decomposition of A provides both half powers.
  SymMatrix a_half = da.apply([](double x) { return std::sqrt(x); });
  SymMatrix a_mhalf = da.apply([](double x) { return 1.0 / std::sqrt(x); });

  SymMatrix m = sym_from_product(a_mhalf.to_matrix() * b.to_matrix() * a_mhalf.to_matrix());
  SpectralDecomposition dm = spectral_decompose(m);
  if (!(dm.eigenvalues.front() > 0)) throw DefinitenessError("A^{-1/2} B A^{-1/2}", dm.eigenvalues.front());
  SymMatrix mt = dm.apply([t](double x) { return std::pow(x, t); });

  return sym_from_product(a_half.to_matrix() * mt.to_matrix() * a_half.to_matrix());
}

SymMatrix gmean(const SymMatrix& a, const SymMatrix& b) { return gmean_t(a, b, 0.5); }

}  // namespace opgeo
