// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gsplit/catalog.hpp"
#include "gsplit/errors.hpp"
#include "gsplit/experiments.hpp"
#include "gsplit/random.hpp"

using namespace gsplit;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::vector<const PairFamily*> coinciding_families() {
  std::vector<const PairFamily*> out;
  for (const PairFamily& f : pair_families())
    if (f.coincide) out.push_back(&f);
  return out;
}

// Operator for seed s: a G = G' preset chosen round-robin, random subspaces.
SplittingOperator iso_operator(std::uint64_t seed) {
  const auto fams = coinciding_families();
  Rng rng(seed);
  const RandomConfig cfg = random_configuration(*fams[(seed - 1) % fams.size()], rng);
  return SplittingOperator::build(cfg.pair, cfg.spaces);
}

Outcome from_catalog(const std::string& name) {
  const auto reports = worked_examples(name);
  std::size_t passed = 0, total = 0;
  std::string failures;
  for (const ExampleReport& r : reports)
    for (const CheckResult& c : r.checks) {
      ++total;
      if (c.passed)
        ++passed;
      else
        failures += " [" + c.name + " measured " + fmt("%.6g", c.measured) + "]";
    }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) + " checks" + failures};
}

Outcome non_normal() {
  const Matrix t{{0.0, 1.0}, {0.0, 0.0}};
  const Vector x{0.0, 1.0};
  auto f = [&](double theta) { return iterate_norms(t, theta, x, 2)[2]; };
  const double half = f(0.5);
  const double mean = 0.5 * (f(0.0) + f(1.0));
  const bool ok = std::abs(half - std::sqrt(5.0) / 4.0) <= 1e-12 && std::abs(mean - 0.5) <= 1e-12 && half > mean;
  return {ok, fmt("f(1/2) = %.15g, (f(0)+f(1))/2 = %.15g", half, mean)};
}

Outcome relaxed_projector() {
  const Matrix t{{1.0, 0.0}, {0.0, 0.0}};
  bool exact = true, classify = true, normal = true;
  for (double theta : theta_grid(-1.0, 3.0, 0.05)) {
    const double th = std::round(theta * 100.0) / 100.0;
    const Matrix r = relax(t, th);
    exact = exact && r == Matrix::diagonal(Vector{1.0, 1.0 - th});
    const Certificates c = certificates(r);
    const bool iso = c.iso_defect <= 1e-12;
    classify = classify && iso == (th == 0.0 || th == 1.0);
    normal = normal && c.normality_defect <= 1e-12;
  }
  return {exact && classify && normal, std::string("exact diag ") + (exact ? "yes" : "no") + ", iso iff theta in {0,1} " +
                                           (classify ? "yes" : "no") + ", normal " + (normal ? "yes" : "no")};
}

Outcome rate_formula() {
  double worst = 0.0;
  int identities = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const SplittingOperator op = iso_operator(s);
    const SpectralReport sr = spectral_report(op.matrix());
    // sigma(T) = {1} means T = I, whose relaxations are all I.
    const bool identity = sr.unit_eigenvalues == sr.eigenvalues.size();
    identities += identity ? 1 : 0;
    const double rho = std::min(1.0, sr.rho1);
    for (double theta : theta_grid(0.1, 1.9, 0.1)) {
      const double expected = identity ? 0.0 : predicted_rate(rho, theta);
      worst = std::max(worst, std::abs(spectral_report(relax(op.matrix(), theta)).rho1 - expected));
    }
  }
  return {worst <= 1e-7, fmt("max |rho1(T_theta) - predicted| = %.3g over 20 operators x 19 thetas (tol 1e-7)", worst) +
                             ", " + std::to_string(identities) + " with T = I"};
}

Outcome symmetry() {
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const SplittingOperator op = iso_operator(s);
    Rng rng(1000 + s);
    const Vector x = gaussian_vector(op.dimension(), rng);
    worst = std::max(worst, symmetry_check(op.matrix(), x, theta_grid(0.1, 1.9, 0.1), 200) / (1.0 + norm(x)));
  }
  return {worst <= 1e-8, fmt("max | ||T_theta^k x|| - ||T_{2-theta}^k x|| | / (1+||x||) = %.3g, k <= 200 (tol 1e-8)", worst)};
}

Outcome characterization() {
  std::size_t consistent = 0, total = 0;
  std::uint64_t seed = 1;
  for (const PairFamily& f : pair_families()) {
    const VerifySummary s = verify_family(f, seed++, 20);
    consistent += s.consistent;
    total += s.trials.size();
  }
  double weakest_witness = std::numeric_limits<double>::infinity();
  bool all_found = true;
  for (const PairFamily& f : pair_families()) {
    if (f.coincide) continue;
    for (std::size_t d : {1u, 2u, 3u}) {
      const WitnessResult w = witness_search(f.make(std::max<std::size_t>(f.min_nodes, 4)), d);
      all_found = all_found && w.found && w.defect > 1e-6;
      weakest_witness = std::min(weakest_witness, w.defect);
    }
  }
  double mt = 0.0;
  for (std::size_t n = 3; n <= 6; ++n)
    mt = std::max(mt, certificates(SplittingOperator::build(pair_family("ring/sequential").make(n), full_product(n, 2)).matrix())
                          .iso_defect);
  const bool ok = consistent == total && all_found && mt <= 1e-9;
  return {ok, std::to_string(consistent) + "/" + std::to_string(total) + " trials consistent; " +
                  fmt("weakest witness defect %.3g (> 1e-6); ring/sequential full-space iso defect %.3g (<= 1e-9)",
                      weakest_witness, mt)};
}

Outcome dr_rates() {
  double worst = 0.0;
  for (double deg : {15.0, 30.0, 45.0, 60.0, 75.0}) {
    const double a = deg * std::numbers::pi / 180.0;
    const Subspace u1 = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}});
    const Subspace u2 = Subspace::from_generators(2, std::vector<Vector>{{std::cos(a), std::sin(a)}});
    const SplittingOperator op =
        SplittingOperator::build(GraphPair::same(preset(Preset::sequential, 2)), ProductSubspace({u1, u2}));
    Rng rng(static_cast<std::uint64_t>(deg));
    const Vector v0 = gaussian_vector(2, rng);
    const double c = std::cos(a);
    for (auto [theta, expected] : {std::pair{1.0, c}, std::pair{0.5, std::sqrt(0.75 * c * c + 0.25)}}) {
      const ConvergenceTrace tr = converge(op, theta, v0, 1e-12, kDefaultMaxIterations);
      worst = std::max(worst, tr.measured_rate ? std::abs(*tr.measured_rate - expected) : 1.0);
    }
  }
  return {worst <= 0.02, fmt("max |measured - predicted| = %.3g over 5 angles x {1, 0.5} (tol 0.02)", worst)};
}

Outcome build_equivalence() {
  Rng rng(9);
  const auto& fams = pair_families();
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const RandomConfig cfg = random_configuration(fams[c % fams.size()], rng);
    const SplittingOperator op = SplittingOperator::build(cfg.pair, cfg.spaces);
    for (int k = 0; k < 10; ++k) {
      const Vector v = gaussian_vector(op.dimension(), rng);
      worst = std::max(worst, norm(axpy(-1.0, op.apply(v), op.apply_iterative(v).next)) / (1.0 + norm(v)));
    }
  }
  return {worst <= 1e-9, fmt("max relative |dense - matrix-free| = %.3g over 50 configurations (tol 1e-9)", worst)};
}

Outcome strict_decrease() {
  std::size_t held = 0, total = 0, operators = 0;
  for (std::uint64_t s = 21; operators < 10; ++s) {
    const SplittingOperator op = iso_operator(s);
    const Matrix fix = fixed_space(op.matrix());
    // For an orthogonal projector Fix T + ker T is everything and theta = 1 has no admissible x.
    if (fix.cols() + null_space(op.matrix(), kRankTol, 1.0).cols() >= op.dimension()) continue;
    ++operators;
    Rng rng(2000 + s);
    Vector x = gaussian_vector(op.dimension(), rng);
    for (std::size_t j = 0; j < fix.cols(); ++j) {
      const Vector q = fix.column(j);
      x = axpy(-dot(q, x), q, x);
    }
    for (double theta : {0.3, 1.0, 1.7}) {
      ++total;
      if (monotonicity_check(op.matrix(), theta, x, 50000)) ++held;
    }
  }
  return {held == total, std::to_string(held) + "/" + std::to_string(total) + " runs strictly decreasing to the 1e-12 floor"};
}

Outcome convexity() {
  double worst = -std::numeric_limits<double>::infinity();
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    Matrix t;
    if (i % 2 == 0) {
      t = iso_operator(static_cast<std::uint64_t>(40 + i)).matrix();
    } else {
      // Q D Q^T with D built from 2x2 rotation-scaling blocks and a trailing real eigenvalue.
      const std::size_t n = 5 + static_cast<std::size_t>(i % 3);
      const Matrix q = qr(gaussian_matrix(n, n, rng), false).q;
      Matrix d(n, n);
      std::size_t k = 0;
      for (; k + 1 < n; k += 2) {
        const double a = 2.0 * rng.uniform() - 1.0, b = 2.0 * rng.uniform() - 1.0;
        d(k, k) = d(k + 1, k + 1) = a;
        d(k, k + 1) = -b;
        d(k + 1, k) = b;
      }
      if (k < n) d(k, k) = 2.0 * rng.uniform() - 1.0;
      t = multiply(multiply(q, d), q.transpose());
    }
    const Vector x = gaussian_vector(t.rows(), rng);
    for (std::size_t k : {1u, 2u, 5u}) worst = std::max(worst, convexity_check(t, x, k, theta_grid(0.0, 2.0, 0.05)));
  }
  return {worst <= 1e-9, fmt("worst midpoint gap = %.3g over 10 normal operators, k in {1,2,5} (tol 1e-9)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 non-normal counterexample", non_normal},
      {"2 relaxed projector", relaxed_projector},
      {"3 relaxation rate formula", rate_formula},
      {"4 theta <-> 2-theta symmetry", symmetry},
      {"5 iso-averaged iff G = G'", characterization},
      {"6 closed-form corrections",
       [] {
         Outcome a = from_catalog("biparallel"), b = from_catalog("malitsky-tam"), c = from_catalog("parallel-down");
         return Outcome{a.passed && b.passed && c.passed,
                        "biparallel " + a.detail + "; ring/sequential " + b.detail + "; parallel_down " + c.detail};
       }},
      {"7 Douglas-Rachford rates", dr_rates},
      {"8 geometric example", [] { return from_catalog("geometric"); }},
      {"9 dense vs matrix-free build", build_equivalence},
      {"10 strict decrease", strict_decrease},
      {"11 midpoint convexity", convexity},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("[%s] criterion %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
