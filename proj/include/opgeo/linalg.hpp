#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opgeo/scalar_fn.hpp"

namespace opgeo {

// Dense row-major matrix.  Used for eigenvector bases and as scratch for
// products whose factors are not symmetric; the public API of the library
// traffics in SymMatrix.
class Matrix {
 public:
  Matrix(int rows, int cols);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);

 private:
  int rows_;
  int cols_;
  std::vector<double> e_;
};

// Closed interval [lo, hi].
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_);
};

// Symmetric matrix with symmetrize-on-construction semantics: entries are
// averaged with their transpose and the construction is rejected when the
// pre-symmetrization asymmetry exceeds 1e-12 times the Frobenius norm.
class SymMatrix {
 public:
  SymMatrix(int dim, const std::vector<double>& entries);
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(int dim);
  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const std::vector<double>& d);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return e_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return e_; }

  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;

  Matrix to_matrix() const;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  struct trusted_t {};
  SymMatrix(trusted_t, int dim, std::vector<double> entries);

  friend SymMatrix sym_from_product(const Matrix& m);
  friend SymMatrix congruence(const Matrix& c, const SymMatrix& s);
  friend struct SpectralDecomposition;
  friend SymMatrix block2(const SymMatrix& a, const SymMatrix& x, const SymMatrix& b);

  int dim_;
  std::vector<double> e_;
};

// Symmetrizes a square Matrix that is symmetric up to roundoff (product of
// the form C S C^T computed in floating point).  Mirrors the lower triangle
// so the result is exactly symmetric.
SymMatrix sym_from_product(const Matrix& m);

// C S C^T for a general (possibly rectangular) C with C.cols() == S.dim().
SymMatrix congruence(const Matrix& c, const SymMatrix& s);

// [[A, X], [X, B]] of dimension 2n for n-dimensional A, X, B.
SymMatrix block2(const SymMatrix& a, const SymMatrix& x, const SymMatrix& b);

// Full eigensystem of a symmetric matrix.  Eigenvalues ascend; basis columns
// are the matching orthonormal eigenvectors.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix basis;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  SymMatrix reconstruct() const;

  // V f(diag) V^T.  No domain checking; see matrix_function for the checked
  // entry point.
  SymMatrix apply(const std::function<double(double)>& f) const;
};

// Cyclic Jacobi diagonalization.  Terminates when the off-diagonal residual
// falls below 1e-13 times the Frobenius norm of the input; throws
// ConvergenceError if 100 sweeps do not get there.
SpectralDecomposition spectral_decompose(const SymMatrix& a);

// f lifted to a symmetric matrix through its eigensystem.  Throws DomainError
// naming the offending eigenvalue when the spectrum leaves f's domain.
SymMatrix matrix_function(const SymMatrix& a, const ScalarFn& f);

// x^p lifted to a symmetric matrix.  Non-integer or negative exponents
// require a positive definite argument; DefinitenessError names `operand`
// otherwise.
SymMatrix matrix_power(const SymMatrix& a, double p, const std::string& operand = "matrix_power argument");

// Largest absolute eigenvalue.
double operator_norm(const SymMatrix& a);

struct LoewnerResult {
  bool ordered;
  double slack;  // smallest eigenvalue of b - a
};

// Tests a <= b in the positive semidefinite order.  `ordered` holds when the
// slack is >= -tol * max(1, ||a||, ||b||) in operator norm.
LoewnerResult loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol);

// Whether the spectrum lies in [iv.lo - tol*s, iv.hi + tol*s] with
// s = max(1, |iv.lo|, |iv.hi|).
bool spectrum_in(const SymMatrix& a, const Interval& iv, double tol);

// Whether [[A, X], [X, B]] is positive semidefinite up to
// -tol * max(1, ||A||, ||B||).
bool block2_psd(const SymMatrix& a, const SymMatrix& x, const SymMatrix& b, double tol);

}  // namespace opgeo
