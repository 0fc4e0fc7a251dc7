#pragma once

// Convergence runs, relaxation sweeps and the behavioural checks on the map
// theta -> ||T_theta^k x||, plus randomized configurations for the
// iso-averaged-iff-G=G' tests.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsplit/graphs.hpp"
#include "gsplit/matlin.hpp"
#include "gsplit/random.hpp"
#include "gsplit/splitting.hpp"
#include "gsplit/subspaces.hpp"

namespace gsplit {

inline constexpr double kDefaultEps = 1e-6;
inline constexpr std::size_t kDefaultMaxIterations = 10000;
/// Distances at or below this are round-off and excluded from rate fits.
inline constexpr double kRateFitFloor = 1e-13;

struct TracePoint {
  std::size_t k = 0;
  double dist = 0.0;  // ||T_theta^k v0 - P_Fix v0||
};

struct ConvergenceTrace {
  double theta = 1.0;
  std::vector<TracePoint> points;
  std::optional<std::size_t> k_stop;
  std::optional<double> measured_rate;
  Vector limit;  // P_Fix v0
  Vector last;   // final iterate
};

/// Iterates v <- T_theta v from v0 until the distance to P_Fix v0 drops below
/// eps or k_max steps are taken. Non-convergence is reported, not raised.
ConvergenceTrace converge(const Matrix& t, double theta, std::span<const double> v0, double eps, std::size_t k_max);
ConvergenceTrace converge(const SplittingOperator& op, double theta, std::span<const double> v0, double eps,
                          std::size_t k_max);

/// exp of the least-squares slope of log(dist) against k over the second half
/// of the points above kRateFitFloor; empty with fewer than two such points.
std::optional<double> fit_rate(std::span<const TracePoint> points);

struct SweepRecord {
  double theta = 1.0;
  std::optional<std::size_t> k_stop;
  double rho1_predicted = 0.0;
  std::optional<double> rho1_measured;
};

/// One record per theta, in input order. Runs are distributed over OpenMP
/// threads. rho1_predicted uses the closed-form relaxation rate when T is
/// iso-averaged and the spectrum of T_theta otherwise.
std::vector<SweepRecord> theta_sweep(const Matrix& t, std::span<const double> thetas, std::span<const double> v0,
                                     double eps, std::size_t k_max);
/// Same contract, single-threaded; the reference for the parallel sweep.
std::vector<SweepRecord> theta_sweep_serial(const Matrix& t, std::span<const double> thetas,
                                            std::span<const double> v0, double eps, std::size_t k_max);

/// start, start + step, ... up to stop (inclusive within step * 1e-9).
std::vector<double> theta_grid(double start, double stop, double step);

/// ||T_theta^k x|| for k = 0..k_max.
Vector iterate_norms(const Matrix& t, double theta, std::span<const double> x, std::size_t k_max);

/// max over theta in the grid and k <= k_max of | ||T_theta^k x|| - ||T_{2-theta}^k x|| |.
double symmetry_check(const Matrix& t, std::span<const double> x, std::span<const double> thetas, std::size_t k_max);

/// Worst f((a+b)/2) - (f(a)+f(b))/2 over adjacent grid points, f(theta) = ||T_theta^k x||.
/// No normality precondition; see convexity_check.
double midpoint_convexity_gap(const Matrix& t, std::span<const double> x, std::size_t k, std::span<const double> grid);
/// As midpoint_convexity_gap, but throws NotNormal unless T certifies as normal.
double convexity_check(const Matrix& t, std::span<const double> x, std::size_t k, std::span<const double> grid);

/// True iff ||T_theta^(k+1) x|| < ||T_theta^k x|| for every k < k_max until
/// the distance to Fix T reaches 1e-12. Throws NotIsoAveraged, DomainError, or
/// ExcludedInput when x lies in Fix T (or Fix T + ker T for theta = 1).
bool monotonicity_check(const Matrix& t, double theta, std::span<const double> x, std::size_t k_max);

struct WitnessResult {
  bool found = false;
  std::optional<std::size_t> index;  // 0-based node whose coordinate product breaks iso-averagedness
  double defect = 0.0;               // defect at the witness, or the maximum seen if none
};

/// Builds the operator on each coordinate product {0} x .. x R^d x .. x {0}
/// and reports the first node whose iso defect exceeds 1e-6.
WitnessResult witness_search(const GraphPair& pair, std::size_t d);

/// A named way of producing a graph pair for a given node count.
struct PairFamily {
  std::string name;
  std::size_t min_nodes = 2;
  bool coincide = true;
  GraphPair (*make)(std::size_t n) = nullptr;
};

/// The six presets with G = G', followed by the three G != G' pairs:
/// parallel_down + {(1,2)} over parallel_down, biparallel over parallel_up,
/// ring over sequential.
const std::vector<PairFamily>& pair_families();
const PairFamily& pair_family(std::string_view name);

struct RandomConfig {
  GraphPair pair;
  ProductSubspace spaces;
};

struct RandomConfigOptions {
  std::size_t max_nodes = 6;
  std::size_t min_ambient = 1;
  std::size_t max_ambient = 4;
};

/// n uniform in [family.min_nodes, max_nodes], d uniform in the ambient range,
/// each U_i a random subspace of uniform dimension in [0, d].
RandomConfig random_configuration(const PairFamily& family, Rng& rng, const RandomConfigOptions& options = {});

struct VerifyTrial {
  std::string family;
  std::size_t nodes = 0;
  std::size_t ambient = 0;
  bool coincide = true;
  bool iso_on_random_spaces = false;
  WitnessResult witness;
  bool consistent = false;
};

struct VerifySummary {
  std::vector<VerifyTrial> trials;
  std::size_t consistent = 0;
};

/// One randomized check of "iso-averaged for all subspaces iff G = G'": for
/// G = G' the operator on random subspaces must certify; for G != G' a
/// coordinate-product witness must exist.
VerifyTrial verify_trial(const PairFamily& family, Rng& rng);
/// `trials` trials cycling through pair_families(). Throws BadSize for trials = 0.
VerifySummary verify_characterization(std::uint64_t seed, std::size_t trials);
/// `trials` trials of a single family.
VerifySummary verify_family(const PairFamily& family, std::uint64_t seed, std::size_t trials);

}  // namespace gsplit
