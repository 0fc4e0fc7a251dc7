#include "gsplit/matlin.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "gsplit/errors.hpp"

namespace gsplit {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, what);
}

// Below this many multiply-adds the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows * cols, "entry count does not match shape");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::column_vector(std::span<const double> values) {
  return Matrix(values.size(), 1, Vector(values.begin(), values.end()));
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  require(values.size() == rows_, "set_column length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
  require(r0 + nrows <= rows_ && c0 + ncols <= cols_, "block out of range");
  Matrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  require(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_, "set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::columns(std::size_t c0, std::size_t count) const { return block(0, c0, rows_, count); }

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, "operator+= shape");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, "operator-= shape");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& e : entries_) e *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }
Vector operator*(const Matrix& a, std::span<const double> x) { return matvec(a, x); }

Matrix multiply(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "multiply shape");
  const std::size_t m = a.rows();
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  Matrix c(m, n);
  [[maybe_unused]] const bool parallel = m * inner * n >= kParallelWork && m > 1;
  const long rows = static_cast<long>(m);
#pragma omp parallel for schedule(static) if (parallel)
  for (long ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto crow = c.row(i);
    const auto arow = a.row(i);
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix multiply_serial(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "multiply shape");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), "apply shape");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector matvec_transpose(const Matrix& a, std::span<const double> x) {
  require(a.rows() == x.size(), "apply_transpose shape");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += r[j] * x[i];
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double frobenius_norm(const Matrix& a) { return norm(a.data()); }

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double e : a.data()) m = std::max(m, std::abs(e));
  return m;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "hstack rows");
  Matrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "vstack cols");
  Matrix out(a.rows() + b.rows(), a.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), 0, b);
  return out;
}

Vector axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  Vector out(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

QrResult qr(const Matrix& a, bool pivoting) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QrResult out{Matrix::identity(m), a, std::vector<std::size_t>(n)};
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  Matrix& r = out.r;
  Matrix& q = out.q;
  Vector v(m);

  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    if (pivoting) {
      std::size_t best = k;
      double best_norm = -1.0;
      for (std::size_t j = k; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += r(i, j) * r(i, j);
        if (s > best_norm) {
          best_norm = s;
          best = j;
        }
      }
      if (best != k) {
        for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
        std::swap(out.perm[k], out.perm[best]);
      }
    }

    double below = 0.0;
    for (std::size_t i = k + 1; i < m; ++i) below += r(i, k) * r(i, k);
    if (below == 0.0) continue;
    const double xnorm = std::sqrt(below + r(k, k) * r(k, k));
    const double alpha = r(k, k) > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = k; i < m; ++i) v[i] = r(i, k);
    v[k] -= alpha;
    double vv = 0.0;
    for (std::size_t i = k; i < m; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;

    for (std::size_t j = k + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * r(i, j);
      s *= beta;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i];
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;

    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t l = k; l < m; ++l) s += q(i, l) * v[l];
      s *= beta;
      for (std::size_t l = k; l < m; ++l) q(i, l) -= s * v[l];
    }
  }
  return out;
}

Matrix permute_columns(const Matrix& a, std::span<const std::size_t> perm) {
  Matrix out(a.rows(), perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, perm[j]);
  return out;
}

std::size_t numerical_rank(const Matrix& r, double tol, double reference) {
  const std::size_t k = std::min(r.rows(), r.cols());
  if (k == 0) return 0;
  const double ref = std::max(std::abs(r(0, 0)), reference);
  if (ref == 0.0) return 0;
  std::size_t rank = 0;
  while (rank < k && std::abs(r(rank, rank)) > tol * ref) ++rank;
  return rank;
}

Matrix null_space(const Matrix& a, double tol, double reference) {
  const std::size_t n = a.cols();
  if (a.rows() == 0 || max_abs(a) == 0.0) return Matrix::identity(n);
  const QrResult f = qr(a.transpose(), true);
  const std::size_t rank = numerical_rank(f.r, tol, reference);
  return f.q.columns(rank, n - rank);
}

Matrix range_basis(const Matrix& a, double tol, double reference) {
  if (a.cols() == 0 || max_abs(a) == 0.0) return Matrix(a.rows(), 0);
  const QrResult f = qr(a, true);
  return f.q.columns(0, numerical_rank(f.r, tol, reference));
}

double operator_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  // Gram matrix on the smaller side; entries are formed pairwise so it is
  // exactly symmetric.
  const bool tall = a.rows() >= a.cols();
  const std::size_t k = tall ? a.cols() : a.rows();
  Matrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double s = 0.0;
      if (tall) {
        for (std::size_t l = 0; l < a.rows(); ++l) s += a(l, i) * a(l, j);
      } else {
        for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * a(j, l);
      }
      gram(i, j) = gram(j, i) = s;
    }
  const SymmetricEigen eig = symmetric_eigen(gram);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

Matrix kron_lift(const Matrix& z, std::size_t d) {
  if (d == 0) throw Error(ErrorCode::BadSize, "kron_lift needs d >= 1");
  Matrix out(z.rows() * d, z.cols() * d);
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) {
      const double zij = z(i, j);
      if (zij == 0.0) continue;
      for (std::size_t t = 0; t < d; ++t) out(i * d + t, j * d + t) = zij;
    }
  return out;
}

LuFactorization::LuFactorization(const Matrix& a) : lu_(a), pivots_(a.rows()) {
  require(a.square(), "LU of a non-square matrix");
  const std::size_t n = a.rows();
  const double scale = std::max(max_abs(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    pivots_[k] = p;
    if (std::abs(lu_(p, k)) <= 1e-15 * scale * static_cast<double>(n))
      throw Error(ErrorCode::Singular, "zero pivot in column " + std::to_string(k));
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / pivot;
      lu_(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
    }
  }
}

Vector LuFactorization::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.rows();
  require(rhs.size() == n, "LU solve length");
  Vector x(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[pivots_[k]]);
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

Matrix LuFactorization::solve(const Matrix& rhs) const {
  require(rhs.rows() == lu_.rows(), "LU solve rows");
  Matrix out(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) out.set_column(j, solve(rhs.column(j)));
  return out;
}

}  // namespace gsplit
