#include "gamelab/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "eigen_util.hpp"

namespace gamelab {

namespace {

void require_finite(const std::vector<double>& entries, const char* what) {
  for (double x : entries) {
    if (!std::isfinite(x)) throw ArgumentError(std::string(what) + ": non-finite entry");
  }
}

std::string shape_string(std::size_t rows, std::size_t cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

std::string matrix_string(const MatrixR& m) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
  }
  os << "]";
  return os.str();
}

void check_dense_side(const MatrixR& m) {
  if (!m.square())
    throw DimensionError("eigenvalues: matrix must be square, got " +
                         shape_string(m.rows(), m.cols()));
  if (m.rows() == 0) throw DimensionError("eigenvalues: empty matrix");
  if (m.rows() > kMaxDenseSide)
    throw DimensionError("eigenvalues: side exceeds dense kernel limit of 64");
}

// Sweep cap for the shifted-QR iteration before declaring non-convergence.
constexpr long kSweepsPerEigenvalue = 100;

}  // namespace

MatrixR::MatrixR(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

MatrixR::MatrixR(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw DimensionError("MatrixR: entry count " + std::to_string(entries_.size()) +
                         " does not match shape " + shape_string(rows_, cols_));
  require_finite(entries_, "MatrixR");
}

MatrixR MatrixR::identity(std::size_t n) {
  MatrixR m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

MatrixR MatrixR::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("MatrixR::from_rows: no rows");
  const std::size_t cols = rows.front().size();
  if (cols == 0) throw DimensionError("MatrixR::from_rows: empty row");
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionError("MatrixR::from_rows: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return MatrixR(rows.size(), cols, std::move(entries));
}

MatrixR MatrixR::transposed() const {
  MatrixR out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

MatrixR MatrixR::operator*(const MatrixR& rhs) const {
  if (cols_ != rhs.rows_)
    throw DimensionError("MatrixR: cannot multiply " + shape_string(rows_, cols_) + " by " +
                         shape_string(rhs.rows_, rhs.cols_));
  MatrixR out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::vector<double> MatrixR::apply(const std::vector<double>& x) const {
  if (x.size() != cols_)
    throw DimensionError("MatrixR::apply: vector length " + std::to_string(x.size()) +
                         " does not match " + shape_string(rows_, cols_));
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

double MatrixR::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

MatrixC::MatrixC(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

MatrixC MatrixC::from_real(const MatrixR& m) {
  MatrixC out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Complex(m(i, j), 0.0);
  return out;
}

Spectrum Spectrum::from_values(std::vector<Complex> values) {
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  Spectrum s;
  s.spectral_radius = values.empty() ? 0.0 : std::abs(values.front());
  s.eigenvalues = std::move(values);
  return s;
}

double SvdResult::sigma_min_positive() const {
  double out = 0.0;
  for (double s : singular_values) {
    if (s > rank_tolerance) out = s;
  }
  return out;
}

Polynomial::Polynomial(std::vector<Complex> ascending_coefficients)
    : coefficients_(std::move(ascending_coefficients)) {
  if (coefficients_.empty()) throw ArgumentError("Polynomial: no coefficients");
  for (const Complex& c : coefficients_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ArgumentError("Polynomial: non-finite coefficient");
  }
  while (coefficients_.size() > 1 && coefficients_.back() == Complex(0.0, 0.0))
    coefficients_.pop_back();
}

Polynomial Polynomial::from_real(const std::vector<double>& ascending_coefficients) {
  std::vector<Complex> coeffs;
  coeffs.reserve(ascending_coefficients.size());
  for (double c : ascending_coefficients) coeffs.emplace_back(c, 0.0);
  return Polynomial(std::move(coeffs));
}

Complex Polynomial::eval(Complex x) const {
  Complex acc = coefficients_.back();
  for (std::size_t i = coefficients_.size() - 1; i-- > 0;) acc = acc * x + coefficients_[i];
  return acc;
}

Spectrum eigenvalues(const MatrixR& m) {
  check_dense_side(m);
  const Eigen::MatrixXd a = detail::to_eigen(m);
  const Eigen::Index n = a.rows();

  Eigen::RealSchur<Eigen::MatrixXd> schur;
  schur.setMaxIterations(kSweepsPerEigenvalue * n);
  schur.compute(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw NumericalError("eigenvalues: QR iteration did not converge for " + matrix_string(m));

  // Read 1x1 and 2x2 diagonal blocks off the real quasi-triangular factor.
  const Eigen::MatrixXd& t = schur.matrixT();
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(n));
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double p = 0.5 * (t(i, i) - t(i + 1, i + 1));
      const double z2 = p * p + t(i + 1, i) * t(i, i + 1);
      const double re = t(i + 1, i + 1) + p;
      if (z2 < 0.0) {
        const double im = std::sqrt(-z2);
        values.emplace_back(re, im);
        values.emplace_back(re, -im);
      } else {
        const double z = std::sqrt(z2);
        values.emplace_back(re + z, 0.0);
        values.emplace_back(re - z, 0.0);
      }
      i += 2;
    } else {
      values.emplace_back(t(i, i), 0.0);
      i += 1;
    }
  }
  return Spectrum::from_values(std::move(values));
}

Spectrum eigenvalues(const MatrixC& m) {
  if (!m.square())
    throw DimensionError("eigenvalues: matrix must be square, got " +
                         shape_string(m.rows(), m.cols()));
  if (m.rows() == 0) throw DimensionError("eigenvalues: empty matrix");
  if (m.rows() > kMaxDenseSide)
    throw DimensionError("eigenvalues: side exceeds dense kernel limit of 64");

  const Eigen::MatrixXcd a = detail::to_eigen(m);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur;
  schur.setMaxIterations(kSweepsPerEigenvalue * a.rows());
  schur.compute(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw NumericalError("eigenvalues: QR iteration did not converge (complex input)");

  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) values.push_back(schur.matrixT()(i, i));
  return Spectrum::from_values(std::move(values));
}

SvdResult svd(const MatrixR& m) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("svd: empty matrix");
  if (m.rows() > kMaxDenseSide || m.cols() > kMaxDenseSide)
    throw DimensionError("svd: side exceeds dense kernel limit of 64");

  const Eigen::MatrixXd a = detail::to_eigen(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> jsvd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdResult out;
  // Eigen factors a = U * S * V^T; the public convention is a = u^T * S * v.
  out.u = detail::from_eigen(Eigen::MatrixXd(jsvd.matrixU().transpose()));
  out.v = detail::from_eigen(Eigen::MatrixXd(jsvd.matrixV().transpose()));
  out.singular_values.assign(jsvd.singularValues().data(),
                             jsvd.singularValues().data() + jsvd.singularValues().size());
  const double sigma_max = out.singular_values.empty() ? 0.0 : out.singular_values.front();
  out.rank_tolerance = 1e-10 * sigma_max * static_cast<double>(std::max(m.rows(), m.cols()));
  out.rank = 0;
  for (double s : out.singular_values) {
    if (s > out.rank_tolerance) ++out.rank;
  }
  return out;
}

MatrixC companion_matrix(const Polynomial& p) {
  const std::size_t n = p.degree();
  if (n < 1) throw ArgumentError("companion_matrix: polynomial must have degree >= 1");
  const Complex lead = p.leading();
  MatrixC c(n, n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = Complex(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -p.coefficients()[i] / lead;
  return c;
}

Spectrum poly_roots(const Polynomial& p) {
  if (p.degree() < 1) throw ArgumentError("poly_roots: polynomial must have degree >= 1");
  return eigenvalues(companion_matrix(p));
}

}  // namespace gamelab
