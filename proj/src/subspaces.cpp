#include "gsplit/subspaces.hpp"

#include <algorithm>
#include <string>

#include "gsplit/errors.hpp"
#include "gsplit/random.hpp"

namespace gsplit {

Subspace Subspace::from_generators(std::size_t ambient, std::span<const Vector> vectors) {
  Matrix generators(ambient, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != ambient)
      throw Error(ErrorCode::DimensionMismatch, "generator " + std::to_string(j) + " has length " +
                                                    std::to_string(vectors[j].size()) + ", expected " +
                                                    std::to_string(ambient));
    generators.set_column(j, vectors[j]);
  }
  return from_columns(generators);
}

Subspace Subspace::from_columns(const Matrix& generators) { return Subspace(range_basis(generators)); }

Subspace Subspace::full(std::size_t ambient) { return Subspace(Matrix::identity(ambient)); }

Subspace Subspace::trivial(std::size_t ambient) { return Subspace(Matrix(ambient, 0)); }

Subspace Subspace::hyperplane(std::span<const double> normal) {
  if (norm(normal) == 0.0) throw Error(ErrorCode::ZeroNormal, "hyperplane normal must be nonzero");
  return Subspace(null_space(Matrix(1, normal.size(), Vector(normal.begin(), normal.end()))));
}

Subspace Subspace::random(std::size_t ambient, std::size_t dim, std::uint64_t seed) {
  if (dim > ambient)
    throw Error(ErrorCode::BadSize, "random subspace of dimension " + std::to_string(dim) + " in R^" +
                                        std::to_string(ambient));
  if (dim == 0) return trivial(ambient);
  Rng rng(seed);
  const Matrix g = gaussian_matrix(ambient, dim, rng);
  return Subspace(qr(g, false).q.columns(0, dim));
}

Matrix Subspace::projector() const { return multiply(basis_, basis_.transpose()); }

Vector Subspace::project(std::span<const double> x) const {
  if (dim() == 0) return Vector(x.size(), 0.0);
  return gsplit::matvec(basis_, matvec_transpose(basis_, x));
}

Subspace complement(const Subspace& u) {
  const std::size_t d = u.ambient();
  if (u.dim() == 0) return Subspace::full(d);
  return Subspace::from_columns(null_space(u.basis().transpose(), kRankTol, 1.0));
}

Subspace intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient() != v.ambient()) throw Error(ErrorCode::DimensionMismatch, "intersect: ambient dimensions differ");
  const Matrix id = Matrix::identity(u.ambient());
  const Matrix stacked = vstack(id - u.projector(), id - v.projector());
  return Subspace::from_columns(null_space(stacked, kRankTol, 1.0));
}

namespace {

// Basis of U n W^perp where W is a subspace of U.
Matrix deflate(const Subspace& u, const Subspace& w) {
  if (u.dim() == 0) return u.basis();
  const Matrix residual = u.basis() - multiply(w.projector(), u.basis());
  return range_basis(residual, kRankTol, 1.0);
}

}  // namespace

double friedrichs_cosine(const Subspace& u1, const Subspace& u2) {
  if (u1.ambient() != u2.ambient())
    throw Error(ErrorCode::DimensionMismatch, "friedrichs_cosine: ambient dimensions differ");
  const Subspace w = intersect(u1, u2);
  const Matrix b1 = deflate(u1, w);
  const Matrix b2 = deflate(u2, w);
  if (b1.cols() == 0 || b2.cols() == 0) return 0.0;
  return std::clamp(operator_norm(multiply(b1.transpose(), b2)), 0.0, 1.0);
}

ProductSubspace::ProductSubspace(std::vector<Subspace> factors) : factors_(std::move(factors)) {
  for (const Subspace& f : factors_)
    if (f.ambient() != ambient())
      throw Error(ErrorCode::DimensionMismatch, "product factors must share the ambient dimension");
}

Matrix ProductSubspace::projector() const {
  const std::size_t d = ambient();
  Matrix p(count() * d, count() * d);
  for (std::size_t i = 0; i < count(); ++i) p.set_block(i * d, i * d, factors_[i].projector());
  return p;
}

ProductSubspace coordinate_product(std::size_t n, std::size_t index, std::size_t ambient) {
  if (index >= n) throw Error(ErrorCode::BadSize, "coordinate index out of range");
  std::vector<Subspace> factors;
  factors.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    factors.push_back(j == index ? Subspace::full(ambient) : Subspace::trivial(ambient));
  return ProductSubspace(std::move(factors));
}

ProductSubspace full_product(std::size_t n, std::size_t ambient) {
  return ProductSubspace(std::vector<Subspace>(n, Subspace::full(ambient)));
}

}  // namespace gsplit
