#include "opgeo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "opgeo/errors.hpp"

namespace opgeo {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DimensionError(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, 0.0) {
  require(rows >= 1 && cols >= 1, "Matrix dimensions must be at least 1");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols_ == b.rows_, "Matrix product dimension mismatch: " + std::to_string(a.cols_) +
                                  " vs " + std::to_string(b.rows_));
  Matrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi)) throw ConfigError("Interval requires lo <= hi");
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(trusted_t, int dim, std::vector<double> entries)
    : dim_(dim), e_(std::move(entries)) {}

SymMatrix::SymMatrix(int dim, const std::vector<double>& entries) : dim_(dim) {
  require(dim >= 1, "SymMatrix dimension must be at least 1");
  require(entries.size() == static_cast<size_t>(dim) * dim,
          "SymMatrix entry count does not match dimension");
  // Symmetrize, tracking how asymmetric the input actually was.
  e_.assign(entries.begin(), entries.end());
  double asym = 0.0;
  double sq = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < i; ++j) {
      const double x = entries[static_cast<size_t>(i) * dim + j];
      const double y = entries[static_cast<size_t>(j) * dim + i];
      asym = std::max(asym, std::abs(x - y));
      const double avg = 0.5 * (x + y);
      e_[static_cast<size_t>(i) * dim + j] = avg;
      e_[static_cast<size_t>(j) * dim + i] = avg;
    }
  }
  for (double v : e_) sq += v * v;
  const double fro = std::sqrt(sq);
  if (asym > 1e-12 * fro) {
    throw DimensionError("SymMatrix input is not symmetric: max asymmetry " +
                         std::to_string(asym) + " exceeds 1e-12 * " + std::to_string(fro));
  }
}

SymMatrix::SymMatrix(const Matrix& m) : SymMatrix(m.rows(), [&] {
      require(m.rows() == m.cols(), "SymMatrix from non-square Matrix");
      std::vector<double> v(static_cast<size_t>(m.rows()) * m.cols());
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v[static_cast<size_t>(i) * m.cols() + j] = m.at(i, j);
      return v;
    }()) {}

SymMatrix SymMatrix::zero(int dim) {
  require(dim >= 1, "SymMatrix dimension must be at least 1");
  return SymMatrix(trusted_t{}, dim, std::vector<double>(static_cast<size_t>(dim) * dim, 0.0));
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m = zero(dim);
  for (int i = 0; i < dim; ++i) m.e_[static_cast<size_t>(i) * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix m = zero(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.e_[i * d.size() + i] = d[i];
  return m;
}

double SymMatrix::frobenius_norm() const {
  double sq = 0.0;
  for (double v : e_) sq += v * v;
  return std::sqrt(sq);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : e_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m.at(i, j) = (*this)(i, j);
  return m;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require(a.dim_ == b.dim_, "SymMatrix sum dimension mismatch");
  std::vector<double> e(a.e_.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = a.e_[i] + b.e_[i];
  return SymMatrix(SymMatrix::trusted_t{}, a.dim_, std::move(e));
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require(a.dim_ == b.dim_, "SymMatrix difference dimension mismatch");
  std::vector<double> e(a.e_.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = a.e_[i] - b.e_[i];
  return SymMatrix(SymMatrix::trusted_t{}, a.dim_, std::move(e));
}

SymMatrix operator*(double s, const SymMatrix& a) {
  std::vector<double> e(a.e_.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = s * a.e_[i];
  return SymMatrix(SymMatrix::trusted_t{}, a.dim_, std::move(e));
}

SymMatrix sym_from_product(const Matrix& m) {
  require(m.rows() == m.cols(), "sym_from_product needs a square matrix");
  const int n = m.rows();
  std::vector<double> e(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    e[static_cast<size_t>(i) * n + i] = m.at(i, i);
    for (int j = 0; j < i; ++j) {
      const double avg = 0.5 * (m.at(i, j) + m.at(j, i));
      e[static_cast<size_t>(i) * n + j] = avg;
      e[static_cast<size_t>(j) * n + i] = avg;
    }
  }
  return SymMatrix(SymMatrix::trusted_t{}, n, std::move(e));
}

SymMatrix congruence(const Matrix& c, const SymMatrix& s) {
  require(c.cols() == s.dim(), "congruence dimension mismatch");
  return sym_from_product(c * s.to_matrix() * c.transposed());
}

SymMatrix block2(const SymMatrix& a, const SymMatrix& x, const SymMatrix& b) {
  const int n = a.dim();
  require(x.dim() == n && b.dim() == n, "block2 operands must share one dimension");
  const int m = 2 * n;
  std::vector<double> e(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      e[static_cast<size_t>(i) * m + j] = a(i, j);
      e[static_cast<size_t>(i) * m + (n + j)] = x(i, j);
      e[static_cast<size_t>(n + i) * m + j] = x(j, i);
      e[static_cast<size_t>(n + i) * m + (n + j)] = b(i, j);
    }
  }
  return SymMatrix(SymMatrix::trusted_t{}, m, std::move(e));
}

// ---------------------------------------------------------------------------
// Spectral decomposition (cyclic Jacobi)

SymMatrix SpectralDecomposition::reconstruct() const {
  return apply([](double x) { return x; });
}

SymMatrix SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  const int n = dim();
  std::vector<double> fd(eigenvalues.size());
  for (size_t i = 0; i < fd.size(); ++i) fd[i] = f(eigenvalues[i]);
  // V f(D) V^T with the upper triangle mirrored so the result is exactly
  // symmetric.
  std::vector<double> e(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += basis.at(i, k) * fd[k] * basis.at(j, k);
      e[static_cast<size_t>(i) * n + j] = acc;
      e[static_cast<size_t>(j) * n + i] = acc;
    }
  }
  return SymMatrix(SymMatrix::trusted_t{}, n, std::move(e));
}

SpectralDecomposition spectral_decompose(const SymMatrix& a) {
  const int n = a.dim();
  std::vector<double> w(a.data());  // working copy, row-major
  Matrix v = Matrix::identity(n);

  auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

  const double fro = a.frobenius_norm();
  const double thresh = 1e-13 * fro;

  auto offdiag = [&] {
    double sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sq += w[idx(i, j)] * w[idx(i, j)];
    return std::sqrt(2.0 * sq);
  };

  bool converged = (n == 1) || fro == 0.0;
  double off = converged ? 0.0 : offdiag();
  if (off <= thresh) converged = true;

  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w[idx(p, q)];
        if (apq == 0.0) continue;
        const double app = w[idx(p, p)];
        const double aqq = w[idx(q, q)];
        const double theta = (aqq - app) / (2.0 * apq);
        // Smaller-magnitude root of t^2 + 2 theta t - 1 = 0 keeps the
        // rotation angle below pi/4, the classically stable choice.
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        w[idx(p, p)] = app - t * apq;
        w[idx(q, q)] = aqq + t * apq;
        w[idx(p, q)] = 0.0;
        w[idx(q, p)] = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = w[idx(k, p)];
          const double akq = w[idx(k, q)];
          w[idx(k, p)] = akp - s * (akq + tau * akp);
          w[idx(p, k)] = w[idx(k, p)];
          w[idx(k, q)] = akq + s * (akp - tau * akq);
          w[idx(q, k)] = w[idx(k, q)];
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = vkp - s * (vkq + tau * vkp);
          v.at(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
    off = offdiag();
    if (off <= thresh) {
      converged = true;
    }
  }
  if (!converged) throw ConvergenceError(off);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return w[idx(i, i)] < w[idx(j, j)]; });

  SpectralDecomposition d{std::vector<double>(n), Matrix(n, n)};
  for (int col = 0; col < n; ++col) {
    d.eigenvalues[col] = w[idx(order[col], order[col])];
    for (int row = 0; row < n; ++row) d.basis.at(row, col) = v.at(row, order[col]);
  }
  return d;
}

SymMatrix matrix_function(const SymMatrix& a, const ScalarFn& f) {
  SpectralDecomposition d = spectral_decompose(a);
  for (double ev : d.eigenvalues) {
    if (!f.domain.contains(ev)) throw DomainError(f.id, ev, f.domain.to_string());
  }
  return d.apply(f.eval);
}

SymMatrix matrix_power(const SymMatrix& a, double p, const std::string& operand) {
  SpectralDecomposition d = spectral_decompose(a);
  const bool integral = (p == std::floor(p)) && p >= 0;
  if (!integral) {
    // Fractional and negative powers live on (0, inf).
    const double lo = d.eigenvalues.front();
    if (!(lo > 0)) throw DefinitenessError(operand, lo);
  }
  return d.apply([p](double x) { return std::pow(x, p); });
}

double operator_norm(const SymMatrix& a) {
  SpectralDecomposition d = spectral_decompose(a);
  return std::max(std::abs(d.eigenvalues.front()), std::abs(d.eigenvalues.back()));
}

LoewnerResult loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim())
    throw DimensionError("loewner_leq dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  SpectralDecomposition d = spectral_decompose(b - a);
  const double slack = d.eigenvalues.front();
  const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
  return LoewnerResult{slack >= -tol * scale, slack};
}

bool spectrum_in(const SymMatrix& a, const Interval& iv, double tol) {
  SpectralDecomposition d = spectral_decompose(a);
  const double scale = std::max({1.0, std::abs(iv.lo), std::abs(iv.hi)});
  return d.eigenvalues.front() >= iv.lo - tol * scale &&
         d.eigenvalues.back() <= iv.hi + tol * scale;
}

bool block2_psd(const SymMatrix& a, const SymMatrix& x, const SymMatrix& b, double tol) {
  SymMatrix blk = block2(a, x, b);
  SpectralDecomposition d = spectral_decompose(blk);
  const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
  return d.eigenvalues.front() >= -tol * scale;
}

}  // namespace opgeo
