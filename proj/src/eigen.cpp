#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gsplit/errors.hpp"
#include "gsplit/matlin.hpp"

namespace gsplit {

namespace {

double sign_of(double magnitude, double sign_source) {
  return sign_source >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

constexpr int kMaxJacobiSweeps = 100;

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& input) {
  if (!input.square()) throw Error(ErrorCode::DimensionMismatch, "symmetric_eigen needs a square matrix");
  const std::size_t n = input.rows();
  const double scale = frobenius_norm(input);
  if (frobenius_norm(input - input.transpose()) > 1e-10 * scale)
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");

  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double threshold = 1e-14 * scale;

  int sweep = 0;
  for (; sweep < kMaxJacobiSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (sweep == kMaxJacobiSweeps && off_diagonal_norm(a) > threshold)
    throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix hessenberg(const Matrix& input) {
  if (!input.square()) throw Error(ErrorCode::DimensionMismatch, "hessenberg needs a square matrix");
  const std::size_t n = input.rows();
  Matrix h = input;
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += h(i, k) * h(i, k);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const double alpha = h(k + 1, k) > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double vv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;
    // H <- P H P with P = I - beta v v^T acting on rows/cols k+1..n-1.
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return h;
}

// Francis double-shift QR on an upper Hessenberg matrix, deflating one real
// eigenvalue or one 2x2 block at a time from the bottom. Exceptional shifts
// are taken after 10 and 20 stagnant iterations on the same block. The whole
// run may spend at most 100*n iterations.
std::vector<Complex> general_eigenvalues(const Matrix& input) {
  if (!input.square()) throw Error(ErrorCode::DimensionMismatch, "general_eigenvalues needs a square matrix");
  const int n = static_cast<int>(input.rows());
  std::vector<Complex> eig(static_cast<std::size_t>(n));
  if (n == 0) return eig;

  Matrix a = hessenberg(input);
  auto at = [&a](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));

  const long budget = 100L * n;
  long total = 0;
  int nn = n - 1;
  double shift = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) + s == s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        eig[static_cast<std::size_t>(nn)] = {x + shift, 0.0};
        --nn;
        continue;
      }
      double y = at(nn - 1, nn - 1);
      double w = at(nn, nn - 1) * at(nn - 1, nn);
      if (l == nn - 1) {
        // Trailing 2x2 block in closed form.
        const double p = 0.5 * (y - x);
        const double q = p * p + w;
        const double z = std::sqrt(std::abs(q));
        x += shift;
        if (q >= 0.0) {
          const double zz = p + sign_of(z, p);
          const double hi = x + zz;
          const double lo = zz != 0.0 ? x - w / zz : hi;
          eig[static_cast<std::size_t>(nn - 1)] = {hi, 0.0};
          eig[static_cast<std::size_t>(nn)] = {lo, 0.0};
        } else {
          eig[static_cast<std::size_t>(nn - 1)] = {x + p, z};
          eig[static_cast<std::size_t>(nn)] = {x + p, -z};
        }
        nn -= 2;
        continue;
      }

      if (++total > budget)
        throw Error(ErrorCode::NoConvergence, "QR iteration budget of " + std::to_string(budget) + " exhausted");
      if (its == 10 || its == 20) {
        shift += x;
        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
        const double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
        y = x = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;

      int m = nn - 2;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (; m >= l; --m) {
        z = at(m, m);
        r = x - z;
        double s = y - z;
        p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
        q = at(m + 1, m + 1) - z - r - s;
        r = at(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
        if (u + v == v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        at(i, i - 2) = 0.0;
        if (i != m + 2) at(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = at(k, k - 1);
          q = at(k + 1, k - 1);
          r = k != nn - 1 ? at(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) at(k, k - 1) = -at(k, k - 1);
        } else {
          at(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          double t = at(k, j) + q * at(k + 1, j);
          if (k != nn - 1) {
            t += r * at(k + 2, j);
            at(k + 2, j) -= t * z;
          }
          at(k + 1, j) -= t * y;
          at(k, j) -= t * x;
        }
        const int mmin = nn < k + 3 ? nn : k + 3;
        for (int i = l; i <= mmin; ++i) {
          double t = x * at(i, k) + y * at(i, k + 1);
          if (k != nn - 1) {
            t += z * at(i, k + 2);
            at(i, k + 2) -= t * r;
          }
          at(i, k + 1) -= t * q;
          at(i, k) -= t;
        }
      }
    } while (nn >= 0 && l < nn - 1);
  }

  std::sort(eig.begin(), eig.end(), [](const Complex& u, const Complex& v) {
    return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
  });
  return eig;
}

}  // namespace gsplit
