#pragma once

// The graph splitting operator T = I - C on (R^d)^(n-1), with
//   C = lift(Z)^T  M_B^{-1}  P_U  lift(Z),    M_B = P_U lift(B) P_U + (I - P_U),
// where B = Deg(G) - 2 Adj(G)^T and Z Z^T = Lap(G'). The operator is kept both
// as a dense matrix and as its ingredients so it can also be applied by the
// forward-substitution sweep over the nodes.

#include <optional>
#include <span>
#include <vector>

#include "gsplit/graphs.hpp"
#include "gsplit/matlin.hpp"
#include "gsplit/subspaces.hpp"

namespace gsplit {

/// P_U lift(B, d) P_U + (I - P_U). Invertible whenever B is lower triangular
/// with a positive diagonal, which holds for every algorithmic graph.
Matrix m_b(const ProductSubspace& spaces, const Matrix& b);

struct IterativeStep {
  Vector next;             // T v
  std::vector<Vector> x;   // the n node variables, x_i in U_i
};

class SplittingOperator {
 public:
  /// Uses laplacian_factor(G') for Z.
  static SplittingOperator build(GraphPair pair, ProductSubspace spaces);
  /// Uses the given n x (n-1) factor. Throws BadFactor unless Z Z^T = Lap(G')
  /// within 1e-10 ||Lap||, SelfCheckFailed if the identities
  /// M_B^{-1} P_U = P_U M_B^{-1} and M_B^{-1} P_U lift(B) P_U = P_U are violated.
  static SplittingOperator build(GraphPair pair, ProductSubspace spaces, Matrix z);

  std::size_t node_count() const noexcept { return pair_.node_count(); }
  std::size_t ambient() const noexcept { return spaces_.ambient(); }
  /// d (n - 1).
  std::size_t dimension() const noexcept { return t_.rows(); }

  const Matrix& matrix() const noexcept { return t_; }
  /// C = I - T.
  Matrix correction() const;
  const Matrix& z() const noexcept { return z_; }
  const GraphPair& pair() const noexcept { return pair_; }
  const ProductSubspace& spaces() const noexcept { return spaces_; }

  Vector apply(std::span<const double> v) const { return gsplit::matvec(t_, v); }
  /// Matrix-free application:
  ///   x_i = P_{U_i}( (2/d_i) sum_{(h,i) in E} x_h + (1/d_i) (lift(Z) v)_i ),
  ///   T v = v - lift(Z)^T x,
  /// computed node by node in increasing order.
  IterativeStep apply_iterative(std::span<const double> v) const;

  /// The operator built from Z O. Throws NotOrthogonal unless O^T O = I within 1e-10.
  SplittingOperator rebase(const Matrix& o) const;

 private:
  SplittingOperator(GraphPair pair, ProductSubspace spaces, Matrix z, Matrix t)
      : pair_(std::move(pair)), spaces_(std::move(spaces)), z_(std::move(z)), t_(std::move(t)) {}

  GraphPair pair_;
  ProductSubspace spaces_;
  Matrix z_;
  Matrix t_;
};

/// theta T + (1 - theta) I. Diagonal entries are formed as 1 - theta (1 - T_ii),
/// so entries 0 and 1 relax to exactly 1 - theta and 1.
Matrix relax(const Matrix& t, double theta);

/// Operator-norm defects of the three structural identities.
struct Certificates {
  double normality_defect = 0.0;  // ||T^T T - T T^T||
  double iso_defect = 0.0;        // ||2 T^T T - T - T^T||
  double isometry_defect = 0.0;   // ||(2T - I)^T (2T - I) - I||
  double threshold = 0.0;         // classification threshold
  bool is_normal = false;
  bool is_iso_averaged = false;
};

/// 1e-9 (1 + ||T||^2): the defects are quadratic in T.
double classification_threshold(const Matrix& t);

Certificates certificates(const Matrix& t);

struct SpectralReport {
  std::vector<Complex> eigenvalues;  // sorted by (re, im)
  std::size_t fix_dim = 0;           // dim ker(T - I)
  std::size_t unit_eigenvalues = 0;  // eigenvalues identified with 1
  bool fix_count_mismatch = false;   // fix_dim != unit_eigenvalues
  double rho1 = 0.0;                 // subdominant radius
  double circle_defect = 0.0;        // max | |lambda - 1/2| - 1/2 |
  double normality_defect = 0.0;
  double iso_defect = 0.0;
  bool is_normal = false;
  bool is_iso_averaged = false;
};

/// Eigenvalue-1 identification band, 1e-7 (1 + ||T||).
double unit_eigenvalue_band(const Matrix& t);

/// max{|lambda| : lambda in sigma(T) \ {1}} union {0}, with "= 1" decided by `band`.
double subdominant_radius(std::span<const Complex> eigenvalues, double band);

/// Throws SelfCheckFailed if T certifies as iso-averaged while some eigenvalue
/// is further than 1e-7 from the circle |lambda - 1/2| = 1/2.
SpectralReport spectral_report(const Matrix& t);

/// Orthonormal basis of Fix T = ker(T - I).
Matrix fixed_space(const Matrix& t);

/// Rate of the theta-relaxation of an iso-averaged map with subdominant radius
/// rho1: sqrt(theta (2 - theta) rho1^2 + (1 - theta)^2). Throws DomainError
/// unless theta in (0, 2) and rho1 in [0, 1].
double predicted_rate(double rho1, double theta);

/// Rate of relaxed Douglas-Rachford for two subspaces.
double dr_rate(const Subspace& u1, const Subspace& u2, double theta);

/// (R_{U2} R_{U1} + I) / 2 with R_U = 2 P_U - I.
Matrix douglas_rachford_map(const Subspace& u1, const Subspace& u2);

}  // namespace gsplit
