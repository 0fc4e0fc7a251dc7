#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gsplit/matlin.hpp"

namespace gsplit {

/// Linear subspace of R^d held as a d x k matrix with orthonormal columns.
class Subspace {
 public:
  /// Span of the given vectors (each of length `ambient`), rank-truncated at kRankTol.
  static Subspace from_generators(std::size_t ambient, std::span<const Vector> vectors);
  /// Columns of `generators` span the subspace.
  static Subspace from_columns(const Matrix& generators);
  static Subspace full(std::size_t ambient);
  static Subspace trivial(std::size_t ambient);
  /// {a}^perp. Throws ZeroNormal.
  static Subspace hyperplane(std::span<const double> normal);
  /// Orthonormalized standard Gaussian d x k matrix drawn from Rng(seed).
  static Subspace random(std::size_t ambient, std::size_t dim, std::uint64_t seed);

  std::size_t ambient() const noexcept { return basis_.rows(); }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  Matrix projector() const;
  Vector project(std::span<const double> x) const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}

  Matrix basis_;
};

Subspace complement(const Subspace& u);
/// Null space of [I - P_U; I - P_V].
Subspace intersect(const Subspace& u, const Subspace& v);

/// Cosine of the Friedrichs angle: the largest principal cosine between
/// U1 and U2 after removing U1 n U2 from both. Zero if either deflated space
/// is trivial.
double friedrichs_cosine(const Subspace& u1, const Subspace& u2);

/// U_1 x ... x U_n inside (R^d)^n, all factors sharing the same ambient d.
class ProductSubspace {
 public:
  /// Throws DimensionMismatch if factors disagree on the ambient dimension.
  explicit ProductSubspace(std::vector<Subspace> factors);

  std::size_t count() const noexcept { return factors_.size(); }
  std::size_t ambient() const noexcept { return factors_.empty() ? 0 : factors_.front().ambient(); }
  const std::vector<Subspace>& factors() const noexcept { return factors_; }
  const Subspace& operator[](std::size_t i) const { return factors_[i]; }

  /// Block-diagonal projector of size nd.
  Matrix projector() const;

 private:
  std::vector<Subspace> factors_;
};

/// Trivial in every factor except the `index`-th (0-based), which is all of R^d.
ProductSubspace coordinate_product(std::size_t n, std::size_t index, std::size_t ambient);

ProductSubspace full_product(std::size_t n, std::size_t ambient);

}  // namespace gsplit
