#include "gsplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsplit/errors.hpp"

namespace gsplit {

Matrix m_b(const ProductSubspace& spaces, const Matrix& b) {
  const std::size_t n = spaces.count();
  if (b.rows() != n || b.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "B must be n x n with n = number of subspaces");
  const std::size_t nd = n * spaces.ambient();
  const Matrix p = spaces.projector();
  return multiply(multiply(p, kron_lift(b, spaces.ambient())), p) + (Matrix::identity(nd) - p);
}

SplittingOperator SplittingOperator::build(GraphPair pair, ProductSubspace spaces) {
  Matrix z = laplacian_factor(pair.subgraph());
  return build(std::move(pair), std::move(spaces), std::move(z));
}

SplittingOperator SplittingOperator::build(GraphPair pair, ProductSubspace spaces, Matrix z) {
  const std::size_t n = pair.node_count();
  if (spaces.count() != n)
    throw Error(ErrorCode::DimensionMismatch, "graph has " + std::to_string(n) + " nodes but " +
                                                  std::to_string(spaces.count()) + " subspaces were given");
  const std::size_t d = spaces.ambient();
  if (d == 0) throw Error(ErrorCode::BadSize, "ambient dimension must be at least 1");
  if (z.rows() != n || z.cols() != n - 1)
    throw Error(ErrorCode::BadFactor, "Z must be " + std::to_string(n) + " x " + std::to_string(n - 1));
  const Matrix lap = matrices(pair.subgraph()).laplacian;
  if (frobenius_norm(multiply(z, z.transpose()) - lap) > 1e-10 * frobenius_norm(lap))
    throw Error(ErrorCode::BadFactor, "Z Z^T does not reproduce Lap(G')");

  const Matrix b = matrices(pair.graph()).b;
  const Matrix p = spaces.projector();
  const Matrix mb = m_b(spaces, b);
  const LuFactorization lu(mb);
  const Matrix zl = kron_lift(z, d);
  const Matrix x = lu.solve(multiply(p, zl));
  Matrix t = Matrix::identity(d * (n - 1)) - multiply(zl.transpose(), x);

  // Structural identities of M_B; a violation means a kernel bug, not bad input.
  const Matrix mb_inv = lu.solve(Matrix::identity(n * d));
  const Matrix bl = kron_lift(b, d);
  const double scale = 1.0 + frobenius_norm(mb_inv) * (1.0 + frobenius_norm(bl));
  const double commute = frobenius_norm(multiply(mb_inv, p) - multiply(p, mb_inv));
  const double restores = frobenius_norm(multiply(mb_inv, multiply(multiply(p, bl), p)) - p);
  if (commute > 1e-9 * scale || restores > 1e-9 * scale)
    throw Error(ErrorCode::SelfCheckFailed, "M_B identities violated (commutator " + std::to_string(commute) +
                                                ", inverse " + std::to_string(restores) + ")");

  return SplittingOperator(std::move(pair), std::move(spaces), std::move(z), std::move(t));
}

Matrix SplittingOperator::correction() const { return Matrix::identity(dimension()) - t_; }

IterativeStep SplittingOperator::apply_iterative(std::span<const double> v) const {
  const std::size_t n = node_count();
  const std::size_t d = ambient();
  if (v.size() != d * (n - 1))
    throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(v.size()) + ", expected " +
                                                  std::to_string(d * (n - 1)));
  const AlgorithmicGraph& g = pair_.graph();

  IterativeStep step{Vector(v.begin(), v.end()), std::vector<Vector>(n, Vector(d, 0.0))};
  Vector w(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(g.degree(i));
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double zij = z_(i, j);
      if (zij == 0.0) continue;
      for (std::size_t t = 0; t < d; ++t) w[t] += zij * v[j * d + t];
    }
    for (double& c : w) c /= di;
    for (std::size_t h : g.predecessors(i))
      for (std::size_t t = 0; t < d; ++t) w[t] += 2.0 / di * step.x[h][t];
    step.x[i] = spaces_[i].project(w);
  }
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double zij = z_(i, j);
      if (zij == 0.0) continue;
      for (std::size_t t = 0; t < d; ++t) step.next[j * d + t] -= zij * step.x[i][t];
    }
  return step;
}

SplittingOperator SplittingOperator::rebase(const Matrix& o) const {
  const std::size_t m = node_count() - 1;
  if (o.rows() != m || o.cols() != m)
    throw Error(ErrorCode::NotOrthogonal, "O must be " + std::to_string(m) + " x " + std::to_string(m));
  if (frobenius_norm(multiply(o.transpose(), o) - Matrix::identity(m)) > 1e-10)
    throw Error(ErrorCode::NotOrthogonal, "O^T O differs from the identity");
  return build(pair_, spaces_, multiply(z_, o));
}

Matrix relax(const Matrix& t, double theta) {
  if (!t.square()) throw Error(ErrorCode::DimensionMismatch, "relax needs a square matrix");
  if (theta == 1.0) return t;
  Matrix out = theta * t;
  for (std::size_t i = 0; i < t.rows(); ++i) out(i, i) = 1.0 - theta * (1.0 - t(i, i));
  return out;
}

double classification_threshold(const Matrix& t) {
  const double nt = operator_norm(t);
  return 1e-9 * (1.0 + nt * nt);
}

Certificates certificates(const Matrix& t) {
  if (!t.square()) throw Error(ErrorCode::DimensionMismatch, "certificates need a square matrix");
  const Matrix tt = t.transpose();
  const Matrix gram = multiply(tt, t);
  const Matrix s = 2.0 * t - Matrix::identity(t.rows());
  Certificates c;
  c.normality_defect = operator_norm(gram - multiply(t, tt));
  c.iso_defect = operator_norm(2.0 * gram - t - tt);
  c.isometry_defect = operator_norm(multiply(s.transpose(), s) - Matrix::identity(t.rows()));
  c.threshold = classification_threshold(t);
  c.is_normal = c.normality_defect <= c.threshold;
  c.is_iso_averaged = c.iso_defect <= c.threshold;
  return c;
}

double unit_eigenvalue_band(const Matrix& t) { return 1e-7 * (1.0 + operator_norm(t)); }

double subdominant_radius(std::span<const Complex> eigenvalues, double band) {
  double rho = 0.0;
  for (const Complex& l : eigenvalues)
    if (std::abs(l - 1.0) > band) rho = std::max(rho, std::abs(l));
  return rho;
}

Matrix fixed_space(const Matrix& t) { return null_space(t - Matrix::identity(t.rows()), kRankTol, 1.0); }

SpectralReport spectral_report(const Matrix& t) {
  SpectralReport r;
  r.eigenvalues = general_eigenvalues(t);
  const double band = unit_eigenvalue_band(t);
  r.unit_eigenvalues = static_cast<std::size_t>(std::count_if(
      r.eigenvalues.begin(), r.eigenvalues.end(), [band](const Complex& l) { return std::abs(l - 1.0) <= band; }));
  r.rho1 = subdominant_radius(r.eigenvalues, band);
  r.fix_dim = fixed_space(t).cols();
  r.fix_count_mismatch = r.fix_dim != r.unit_eigenvalues;
  for (const Complex& l : r.eigenvalues)
    r.circle_defect = std::max(r.circle_defect, std::abs(std::abs(l - 0.5) - 0.5));

  const Certificates c = certificates(t);
  r.normality_defect = c.normality_defect;
  r.iso_defect = c.iso_defect;
  r.is_normal = c.is_normal;
  r.is_iso_averaged = c.is_iso_averaged;
  if (r.is_iso_averaged && r.circle_defect > 1e-7)
    throw Error(ErrorCode::SelfCheckFailed,
                "iso-averaged map has an eigenvalue off the circle (defect " + std::to_string(r.circle_defect) + ")");
  return r;
}

double predicted_rate(double rho1, double theta) {
  if (!(theta > 0.0 && theta < 2.0))
    throw Error(ErrorCode::DomainError, "relaxation parameter must lie in (0, 2), got " + std::to_string(theta));
  if (!(rho1 >= 0.0 && rho1 <= 1.0))
    throw Error(ErrorCode::DomainError, "subdominant radius must lie in [0, 1], got " + std::to_string(rho1));
  return std::sqrt(theta * (2.0 - theta) * rho1 * rho1 + (1.0 - theta) * (1.0 - theta));
}

double dr_rate(const Subspace& u1, const Subspace& u2, double theta) {
  return predicted_rate(friedrichs_cosine(u1, u2), theta);
}

Matrix douglas_rachford_map(const Subspace& u1, const Subspace& u2) {
  if (u1.ambient() != u2.ambient()) throw Error(ErrorCode::DimensionMismatch, "ambient dimensions differ");
  const Matrix id = Matrix::identity(u1.ambient());
  const Matrix r1 = 2.0 * u1.projector() - id;
  const Matrix r2 = 2.0 * u2.projector() - id;
  return 0.5 * (multiply(r2, r1) + id);
}

}  // namespace gsplit
