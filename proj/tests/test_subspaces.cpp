#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsplit/errors.hpp"
#include "gsplit/random.hpp"
#include "gsplit/subspaces.hpp"
#include "oracles.hpp"

using namespace gsplit;

namespace {

Matrix basis_matrix(const std::vector<Vector>& cols, std::size_t ambient) {
  Matrix b(ambient, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) b.set_column(j, cols[j]);
  return b;
}

// All singular values of A by power iteration with deflation on A^T A.
std::vector<double> singular_values(Matrix a) {
  Matrix gram = oracle::product(oracle::transpose(a), a);
  const std::size_t k = gram.rows();
  std::vector<double> out;
  for (std::size_t s = 0; s < k; ++s) {
    Vector x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = 1.0 + 0.37 * static_cast<double>((i + s) % 5);
    double lambda = 0.0;
    for (int it = 0; it < 6000; ++it) {
      Vector y(k, 0.0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) y[i] += gram(i, j) * x[j];
      const double ny = std::sqrt(oracle::dot(y, y));
      if (ny < 1e-300) break;
      lambda = oracle::dot(x, y);
      for (std::size_t i = 0; i < k; ++i) x[i] = y[i] / ny;
    }
    out.push_back(std::sqrt(std::max(lambda, 0.0)));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) gram(i, j) -= lambda * x[i] * x[j];
  }
  return out;
}

// Largest principal cosine strictly below 1 between the two spans; cosines
// equal to 1 belong to the intersection.
double principal_angle_oracle(const Subspace& u, const Subspace& v) {
  const auto bu = oracle::gram_schmidt(oracle::columns_of(u.basis()));
  const auto bv = oracle::gram_schmidt(oracle::columns_of(v.basis()));
  if (bu.empty() || bv.empty()) return 0.0;
  const Matrix m = oracle::product(oracle::transpose(basis_matrix(bu, u.ambient())), basis_matrix(bv, v.ambient()));
  double best = 0.0;
  for (double s : singular_values(m))
    if (s < 1.0 - 1e-7) best = std::max(best, s);
  return best;
}

void check_projector(const Subspace& u) {
  const Matrix p = u.projector();
  CHECK(max_abs(multiply(p, p) - p) <= 1e-11);
  CHECK(max_abs(p - p.transpose()) <= 1e-11);
  double trace = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) trace += p(i, i);
  CHECK(std::abs(trace - static_cast<double>(u.dim())) <= 1e-11);
  CHECK(max_abs(multiply(u.basis().transpose(), u.basis()) - Matrix::identity(u.dim())) <= 1e-12);
}

}  // namespace

TEST_CASE("from_generators") {
  const Subspace a = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}, {2.0, 0.0}});
  CHECK(a.dim() == 1);
  CHECK(max_abs(a.projector() - Matrix{{1.0, 0.0}, {0.0, 0.0}}) <= 1e-15);
  CHECK(Subspace::from_generators(2, std::vector<Vector>{}).dim() == 0);
  CHECK(Subspace::from_generators(3, std::vector<Vector>{{0.0, 0.0, 0.0}}).dim() == 0);
  const Subspace full = Subspace::from_generators(2, std::vector<Vector>{{1.0, 1.0}, {1.0, -1.0}});
  CHECK(full.dim() == 2);
  CHECK(max_abs(full.projector() - Matrix::identity(2)) <= 1e-15);
}

TEST_CASE("projector examples and properties") {
  CHECK(max_abs(Subspace::trivial(3).projector()) == 0.0);
  CHECK(Subspace::full(2).projector() == Matrix::identity(2));
  for (std::size_t d = 1; d <= 6; ++d)
    for (std::size_t k = 0; k <= d; ++k) check_projector(Subspace::random(d, k, 100 * d + k));
}

TEST_CASE("hyperplane, complement and intersection") {
  const Vector a{-1.0, 6.0};
  const Subspace h = Subspace::hyperplane(a);
  REQUIRE(h.dim() == 1);
  const Vector b = h.basis().column(0);
  CHECK(std::abs(std::abs(b[0] * 6.0 + b[1] * 1.0) / std::sqrt(37.0) - 1.0) <= 1e-14);

  const Subspace c = complement(h);
  REQUIRE(c.dim() == 1);
  CHECK(std::abs(std::abs(dot(c.basis().column(0), a)) - norm(a)) <= 1e-13);
  CHECK(max_abs(h.projector() + c.projector() - Matrix::identity(2)) <= 1e-14);

  CHECK_THROWS_AS(Subspace::hyperplane(Vector{0.0, 0.0}), Error);

  const Subspace e1 = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}});
  const Subspace e2 = Subspace::from_generators(2, std::vector<Vector>{{0.0, 1.0}});
  CHECK(intersect(e1, e2).dim() == 0);

  const Subspace p1 = Subspace::from_generators(3, std::vector<Vector>{{1, 0, 0}, {0, 1, 0}});
  const Subspace p2 = Subspace::from_generators(3, std::vector<Vector>{{0, 1, 0}, {0, 0, 1}});
  const Subspace line = intersect(p1, p2);
  REQUIRE(line.dim() == 1);
  CHECK(std::abs(std::abs(line.basis()(1, 0)) - 1.0) <= 1e-13);
}

TEST_CASE("intersection membership") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Subspace u = Subspace::random(5, 3, seed);
    const Subspace v = Subspace::random(5, 4, seed + 1000);
    const Subspace w = intersect(u, v);
    CHECK(w.dim() == 2);
    for (std::size_t j = 0; j < w.dim(); ++j) {
      const Vector x = w.basis().column(j);
      CHECK(norm(axpy(-1.0, u.project(x), x)) <= 1e-10);
      CHECK(norm(axpy(-1.0, v.project(x), x)) <= 1e-10);
    }
  }
}

TEST_CASE("friedrichs cosine examples") {
  const double alpha = std::numbers::pi / 3.0;
  const Subspace e1 = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}});
  const Subspace l = Subspace::from_generators(2, std::vector<Vector>{{std::cos(alpha), std::sin(alpha)}});
  CHECK(std::abs(friedrichs_cosine(e1, l) - 0.5) <= 1e-14);
  CHECK(friedrichs_cosine(e1, e1) == 0.0);
  const Subspace e2 = Subspace::from_generators(2, std::vector<Vector>{{0.0, 1.0}});
  CHECK(std::abs(friedrichs_cosine(e1, e2)) <= 1e-15);
}

TEST_CASE("friedrichs cosine matches the principal-angle oracle in R^5") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    const std::size_t k1 = rng.uniform_index(1, 4);
    const std::size_t k2 = rng.uniform_index(1, 4);
    const Subspace u = Subspace::random(5, k1, 2 * seed);
    const Subspace v = Subspace::random(5, k2, 2 * seed + 1);
    CAPTURE(k1);
    CAPTURE(k2);
    const double c = friedrichs_cosine(u, v);
    CHECK(c >= 0.0);
    CHECK(c < 1.0);
    CHECK(std::abs(c - friedrichs_cosine(v, u)) <= 1e-12);
    CHECK(std::abs(c - principal_angle_oracle(u, v)) <= 1e-9);
  }
}

TEST_CASE("random subspaces are deterministic") {
  CHECK(Subspace::random(3, 0, 1).dim() == 0);
  CHECK(max_abs(Subspace::random(3, 3, 1).projector() - Matrix::identity(3)) <= 1e-14);
  CHECK(Subspace::random(4, 2, 77).basis() == Subspace::random(4, 2, 77).basis());
  CHECK_FALSE(Subspace::random(4, 2, 77).basis() == Subspace::random(4, 2, 78).basis());
}

TEST_CASE("coordinate and product subspaces") {
  const ProductSubspace c = coordinate_product(3, 1, 2);
  CHECK(c.count() == 3);
  CHECK(c[0].dim() == 0);
  CHECK(c[1].dim() == 2);
  CHECK(c[2].dim() == 0);
  Matrix expected(6, 6);
  expected(2, 2) = expected(3, 3) = 1.0;
  CHECK(c.projector() == expected);

  CHECK(coordinate_product(1, 0, 2)[0].dim() == 2);

  const ProductSubspace p({Subspace::random(3, 1, 1), Subspace::random(3, 2, 2)});
  const Matrix proj = p.projector();
  CHECK(proj.block(0, 0, 3, 3) == p[0].projector());
  CHECK(proj.block(3, 3, 3, 3) == p[1].projector());
  CHECK(max_abs(proj.block(0, 3, 3, 3)) == 0.0);

  CHECK_THROWS_AS(ProductSubspace({Subspace::full(2), Subspace::full(3)}), Error);
}
