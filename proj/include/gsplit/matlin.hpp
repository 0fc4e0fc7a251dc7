#pragma once

// Dense real linear algebra for the small matrices that appear in splitting
// operators (a few hundred rows at most). Everything is row-major and value
// semantic; no routine keeps state between calls.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gsplit {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

/// Default relative rank threshold used by every rank decision in the library.
inline constexpr double kRankTol = 1e-10;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix column_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<double> data() noexcept { return entries_; }
  std::span<const double> data() const noexcept { return entries_; }
  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  /// Columns [c0, c0 + count).
  Matrix columns(std::size_t c0, std::size_t count) const;

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Matrix product. Rows of the result are distributed over OpenMP threads once
/// the flop count is large enough to amortize the fork.
Matrix multiply(const Matrix& a, const Matrix& b);
/// Straight triple loop; kept as the reference the parallel kernel is tested against.
Matrix multiply_serial(const Matrix& a, const Matrix& b);

Vector matvec(const Matrix& a, std::span<const double> x);
Vector matvec_transpose(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> x);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y);  // alpha*x + y

struct QrResult {
  Matrix q;                       // m x m, orthogonal
  Matrix r;                       // m x n, upper triangular
  std::vector<std::size_t> perm;  // column j of A*P is column perm[j] of A
};

/// Householder QR. With pivoting, the column of largest remaining norm is moved
/// forward at each step so |R(k,k)| is non-increasing.
QrResult qr(const Matrix& a, bool pivoting);

/// A with its columns reordered by `perm` (the A*P of a pivoted QR).
Matrix permute_columns(const Matrix& a, std::span<const std::size_t> perm);

/// Number of leading diagonal entries of a pivoted R exceeding
/// tol * max(|R(0,0)|, reference). A positive `reference` supplies the natural
/// scale of the problem so that a matrix of pure round-off has rank zero.
std::size_t numerical_rank(const Matrix& r, double tol = kRankTol, double reference = 0.0);

/// Orthonormal basis of ker A; the column count is cols(A) minus the rank at `tol`.
Matrix null_space(const Matrix& a, double tol = kRankTol, double reference = 0.0);

/// Orthonormal basis of the column space of A.
Matrix range_basis(const Matrix& a, double tol = kRankTol, double reference = 0.0);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi. Throws NotSymmetric when ||A - A^T|| > 1e-10 ||A||.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// All n eigenvalues of a real square matrix (Hessenberg reduction followed by
/// Francis double-shift QR). Sorted by (re, im). Throws NoConvergence.
std::vector<Complex> general_eigenvalues(const Matrix& a);

/// Upper Hessenberg matrix orthogonally similar to A.
Matrix hessenberg(const Matrix& a);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Z (x) I_d: block (i, j) of the result is Z(i, j) * I_d.
Matrix kron_lift(const Matrix& z, std::size_t d);

/// LU with partial pivoting of a square matrix; throws Singular on a zero pivot.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& a);

  Vector solve(std::span<const double> rhs) const;
  Matrix solve(const Matrix& rhs) const;
  std::size_t size() const noexcept { return lu_.rows(); }

 private:
  Matrix lu_;
  std::vector<std::size_t> pivots_;
};

}  // namespace gsplit
