#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gamelab/errors.hpp"

namespace gamelab {

using Complex = std::complex<double>;

/// Dense real matrix with row-major storage. Entries are validated to be
/// finite on every constructing entry point.
class MatrixR {
 public:
  MatrixR() = default;
  MatrixR(std::size_t rows, std::size_t cols);
  MatrixR(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static MatrixR identity(std::size_t n);
  static MatrixR from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  const std::vector<double>& entries() const { return entries_; }

  MatrixR transposed() const;
  MatrixR operator*(const MatrixR& rhs) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  /// Largest absolute row sum (the infinity operator norm).
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Dense complex matrix, row-major. Used for companion matrices of
/// complex-coefficient polynomials.
class MatrixC {
 public:
  MatrixC() = default;
  MatrixC(std::size_t rows, std::size_t cols);

  static MatrixC from_real(const MatrixR& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  Complex& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Eigenvalue (or root) multiset of a matrix or polynomial.
///
/// Eigenvalues are sorted by descending magnitude, ties broken by descending
/// real part, then descending imaginary part, so output is deterministic and
/// diffable. spectral_radius is the exact maximum magnitude over the list.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;

  static Spectrum from_values(std::vector<Complex> values);
};

/// Result of a singular value decomposition, in the convention
///   input == u^T * diag(singular_values) * v
/// with u (rows x rows) and v (cols x cols) orthogonal and the diagonal
/// matrix rectangular (rows x cols). rank counts singular values above
/// rank_tolerance.
struct SvdResult {
  MatrixR u;
  std::vector<double> singular_values;  // nonincreasing, length min(rows, cols)
  MatrixR v;
  std::size_t rank = 0;
  double rank_tolerance = 0.0;

  double sigma_max() const { return singular_values.empty() ? 0.0 : singular_values.front(); }
  /// Smallest singular value above the rank tolerance; 0 for the zero matrix.
  double sigma_min_positive() const;
};

/// Univariate polynomial with complex coefficients in ascending degree order.
/// Trailing zero coefficients are trimmed on construction so the leading
/// coefficient of any polynomial of degree >= 1 is nonzero.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> ascending_coefficients);

  static Polynomial from_real(const std::vector<double>& ascending_coefficients);

  std::size_t degree() const { return coefficients_.size() - 1; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  Complex leading() const { return coefficients_.back(); }

  /// Horner evaluation.
  Complex eval(Complex x) const;

 private:
  std::vector<Complex> coefficients_;
};

/// Maximum matrix side accepted by the dense eigenvalue/SVD kernel.
inline constexpr std::size_t kMaxDenseSide = 64;

/// All eigenvalues of a small square matrix, with algebraic multiplicity.
/// Throws DimensionError for non-square or oversized input and NumericalError
/// if the QR iteration does not converge within the documented sweep cap.
Spectrum eigenvalues(const MatrixR& m);
Spectrum eigenvalues(const MatrixC& m);

/// Full singular value decomposition (see SvdResult for the convention).
/// The default rank tolerance is 1e-10 * sigma_max * max(rows, cols).
SvdResult svd(const MatrixR& m);

/// All roots of a polynomial of degree >= 1, computed as the eigenvalues of
/// its companion matrix.
Spectrum poly_roots(const Polynomial& p);

/// Companion matrix of a polynomial of degree >= 1 (after normalizing to a
/// monic polynomial); its eigenvalues are the roots of p.
MatrixC companion_matrix(const Polynomial& p);

}  // namespace gamelab
