#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsplit/catalog.hpp"
#include "gsplit/errors.hpp"
#include "gsplit/experiments.hpp"
#include "oracles.hpp"

using namespace gsplit;

namespace {

Subspace line(double angle) {
  return Subspace::from_generators(2, std::vector<Vector>{{std::cos(angle), std::sin(angle)}});
}

SplittingOperator dr_operator(double alpha) {
  return SplittingOperator::build(GraphPair::same(preset(Preset::sequential, 2)), ProductSubspace({line(0.0), line(alpha)}));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::ConfigError;
}

// Iso-averaged operators from random G = G' configurations.
std::vector<SplittingOperator> iso_operators(std::uint64_t seed, std::size_t count) {
  std::vector<SplittingOperator> out;
  Rng rng(seed);
  const auto& fams = pair_families();
  std::size_t i = 0;
  while (out.size() < count) {
    const PairFamily& fam = fams[i++ % fams.size()];
    if (!fam.coincide) continue;
    const RandomConfig cfg = random_configuration(fam, rng);
    out.push_back(SplittingOperator::build(cfg.pair, cfg.spaces));
  }
  return out;
}

}  // namespace

TEST_CASE("converge from a fixed point stops immediately") {
  const SplittingOperator op = dr_operator(std::numbers::pi / 4.0);
  const Vector v0 = Subspace::full(2).project(Vector{0.0, 0.0});
  const ConvergenceTrace tr = converge(op, 1.0, v0, 1e-6, 100);
  REQUIRE(tr.k_stop);
  CHECK(*tr.k_stop == 0);
  CHECK(tr.points.front().dist == 0.0);
}

TEST_CASE("converge on the 60 degree Douglas-Rachford map") {
  const SplittingOperator op = dr_operator(std::numbers::pi / 3.0);
  Rng rng(3);
  const Vector v0 = gaussian_vector(2, rng);
  const ConvergenceTrace tr = converge(op, 1.0, v0, 1e-10, 10000);
  REQUIRE(tr.k_stop);
  REQUIRE(tr.measured_rate);
  CHECK(std::abs(*tr.measured_rate - 0.5) <= 0.02);
  for (std::size_t i = 1; i < tr.points.size(); ++i) {
    CHECK(tr.points[i].k > tr.points[i - 1].k);
    CHECK(tr.points[i].dist >= 0.0);
  }
  CHECK(tr.points.back().dist < 1e-10);

  const ConvergenceTrace capped = converge(op, 1.0, v0, 1e-30, 5);
  CHECK_FALSE(capped.k_stop);
  CHECK(capped.points.size() == 6);
}

TEST_CASE("geometric example limit") {
  const Vector a1{-1.0, 6.0}, a2{-3.0, 1.0}, a3{-3.0, -4.0};
  const Vector v0{1.0, -10.0, -8.0, 1.0};
  const double mu = (a3[0] * a2[1] - a3[1] * a2[0]) / (a1[0] * a2[1] - a1[1] * a2[0]);
  CHECK(std::abs(mu + 15.0 / 17.0) <= 1e-15);
  const AlgorithmicGraph seq = preset(Preset::sequential, 3);
  const SplittingOperator op = SplittingOperator::build(
      GraphPair::same(seq),
      ProductSubspace({Subspace::hyperplane(a1), Subspace::hyperplane(a2), Subspace::hyperplane(a3)}),
      tree_incidence_factor(seq));
  const double coef = (mu * (a1[0] * v0[0] + a1[1] * v0[1]) + (a3[0] * v0[2] + a3[1] * v0[3])) /
                      (mu * mu * oracle::dot(a1, a1) + oracle::dot(a3, a3));
  const Vector e{coef * mu * a1[0], coef * mu * a1[1], coef * a3[0], coef * a3[1]};
  const ConvergenceTrace tr = converge(op, 1.0, v0, 1e-10, 5000);
  REQUIRE(tr.k_stop);
  CHECK(norm(axpy(-1.0, e, tr.limit)) <= 1e-10);
  CHECK(norm(axpy(-1.0, e, tr.last)) <= 1e-8);
}

TEST_CASE("fit_rate") {
  std::vector<TracePoint> pts;
  for (std::size_t k = 0; k < 40; ++k) pts.push_back({k, 3.0 * std::pow(0.7, static_cast<double>(k))});
  REQUIRE(fit_rate(pts));
  CHECK(std::abs(*fit_rate(pts) - 0.7) <= 1e-12);
  pts.push_back({40, 1e-16});
  CHECK(std::abs(*fit_rate(pts) - 0.7) <= 1e-12);
  CHECK_FALSE(fit_rate(std::vector<TracePoint>{{0, 1.0}}));
}

TEST_CASE("theta grid") {
  const auto g = theta_grid(0.1, 1.9, 0.1);
  REQUIRE(g.size() == 19);
  CHECK(std::abs(g.back() - 1.9) <= 1e-12);
  CHECK(theta_grid(0.5, 0.4, 0.1).empty());
}

TEST_CASE("theta sweep on an iso-averaged operator") {
  const SplittingOperator op = iso_operators(5, 1).front();
  Rng rng(6);
  const Vector v0 = gaussian_vector(op.dimension(), rng);
  const std::vector<double> grid = theta_grid(0.1, 1.9, 0.1);
  const auto recs = theta_sweep(op.matrix(), grid, v0, 1e-8, 20000);
  REQUIRE(recs.size() == grid.size());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const SweepRecord& r : recs) {
    CHECK(r.rho1_predicted >= 0.0);
    CHECK(r.rho1_predicted <= 1.0);
    REQUIRE(r.k_stop);
    best = std::min(best, *r.k_stop);
  }
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& a = recs[i];
    const auto& b = recs[recs.size() - 1 - i];
    CHECK(std::abs(static_cast<double>(*a.k_stop) - static_cast<double>(*b.k_stop)) <= 1.0);
  }
  const SweepRecord& mid = recs[9];
  CHECK(std::abs(mid.theta - 1.0) <= 1e-12);
  CHECK(*mid.k_stop == best);
  if (mid.rho1_measured && mid.rho1_predicted > 0.05) CHECK(std::abs(*mid.rho1_measured - mid.rho1_predicted) <= 0.02);
  CHECK(theta_sweep(op.matrix(), std::vector<double>{}, v0, 1e-8, 100).empty());
}

TEST_CASE("sweep uses the spectrum when the map is not iso-averaged") {
  const Matrix t = Matrix::identity(3) - Matrix::diagonal(Vector{0.5, 0.5, 0.0});
  const auto recs = theta_sweep(t, std::vector<double>{0.5, 1.0, 1.5}, Vector{1.0, 1.0, 1.0}, 1e-8, 1000);
  CHECK(std::abs(recs[0].rho1_predicted - 0.75) <= 1e-12);
  CHECK(std::abs(recs[1].rho1_predicted - 0.5) <= 1e-12);
  CHECK(std::abs(recs[2].rho1_predicted - 0.25) <= 1e-12);
}

TEST_CASE("measured rate tracks the predicted rate on iso-averaged operators") {
  int checked = 0;
  for (const SplittingOperator& op : iso_operators(31, 12)) {
    const SpectralReport sr = spectral_report(op.matrix());
    if (sr.rho1 < 0.2 || sr.rho1 > 0.97) continue;
    Rng rng(op.dimension());
    const Vector v0 = gaussian_vector(op.dimension(), rng);
    for (double theta : {0.5, 1.0, 1.5}) {
      const ConvergenceTrace tr = converge(op, theta, v0, 1e-12, 20000);
      const auto usable = std::count_if(tr.points.begin(), tr.points.end(),
                                        [](const TracePoint& p) { return p.dist > 1e-12 && p.dist < 1e-2; });
      if (usable < 30 || !tr.measured_rate) continue;
      CHECK(std::abs(*tr.measured_rate - predicted_rate(sr.rho1, theta)) <= 0.03);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("symmetry check") {
  for (const SplittingOperator& op : iso_operators(8, 4)) {
    Rng rng(op.dimension() + 1);
    const Vector x = gaussian_vector(op.dimension(), rng);
    CHECK(symmetry_check(op.matrix(), x, theta_grid(0.1, 1.9, 0.1), 100) <= 1e-8 * (1.0 + norm(x)));
  }
  const Matrix p{{1.0, 0.0}, {0.0, 0.0}};
  CHECK(symmetry_check(p, Vector{0.3, -2.0}, std::vector<double>{0.25, 0.5, 0.75}, 30) <= 1e-12);
  const Matrix bi = Matrix::identity(3) - Matrix::diagonal(Vector{0.5, 0.5, 0.0});
  CHECK(symmetry_check(bi, Vector{1.0, 1.0, 1.0}, std::vector<double>{0.5}, 5) > 1e-3);
}

TEST_CASE("convexity check") {
  const Matrix nil{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(code_of([&] { convexity_check(nil, Vector{0.0, 1.0}, 2, theta_grid(0.0, 1.0, 0.05)); }) ==
        ErrorCode::NotNormal);
  const double gap = midpoint_convexity_gap(nil, Vector{0.0, 1.0}, 2, std::vector<double>{0.0, 1.0});
  CHECK(std::abs(gap - (std::sqrt(5.0) / 4.0 - 0.5)) <= 1e-12);
  CHECK(convexity_check(Matrix::identity(3), Vector{1.0, 2.0, 3.0}, 5, theta_grid(0.05, 1.95, 0.05)) == 0.0);
  for (const SplittingOperator& op : iso_operators(12, 3))
    for (std::size_t k : {1u, 2u, 5u}) {
      Rng rng(k);
      CHECK(convexity_check(op.matrix(), gaussian_vector(op.dimension(), rng), k, theta_grid(0.0, 2.0, 0.05)) <= 1e-9);
    }
}

TEST_CASE("monotonicity check") {
  const SplittingOperator op = dr_operator(std::numbers::pi / 5.0);
  CHECK(monotonicity_check(op.matrix(), 0.5, Vector{0.3, 1.1}, 500));
  CHECK(monotonicity_check(op.matrix(), 1.7, Vector{-0.8, 0.2}, 500));

  const Matrix p{{1.0, 0.0}, {0.0, 0.0}};
  CHECK(code_of([&] { monotonicity_check(p, 0.5, Vector{2.0, 0.0}, 10); }) == ErrorCode::ExcludedInput);
  CHECK(code_of([&] { monotonicity_check(p, 1.0, Vector{0.0, 1.0}, 10); }) == ErrorCode::ExcludedInput);
  CHECK(monotonicity_check(p, 0.5, Vector{0.0, 1.0}, 100));
  CHECK(code_of([&] { monotonicity_check(p, 2.5, Vector{0.0, 1.0}, 10); }) == ErrorCode::DomainError);
  const Matrix nil{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(code_of([&] { monotonicity_check(nil, 0.5, Vector{0.0, 1.0}, 10); }) == ErrorCode::NotIsoAveraged);
}

TEST_CASE("witness search") {
  const WitnessResult none = witness_search(GraphPair::same(preset(Preset::sequential, 3)), 2);
  CHECK_FALSE(none.found);
  CHECK(none.defect <= 1e-9);

  const WitnessResult bp = witness_search(GraphPair::make(preset(Preset::biparallel, 4), preset(Preset::parallel_up, 4)), 1);
  CHECK(bp.found);
  REQUIRE(bp.index);
  CHECK(bp.defect > 1e-6);

  for (const PairFamily& fam : pair_families()) {
    if (fam.coincide) continue;
    for (std::size_t n = fam.min_nodes; n <= 6; ++n)
      for (std::size_t d : {1u, 2u}) CHECK(witness_search(fam.make(n), d).found);
  }

  const GraphPair mt = pair_family("ring/sequential").make(4);
  CHECK(certificates(SplittingOperator::build(mt, full_product(4, 2)).matrix()).iso_defect <= 1e-9);
}

TEST_CASE("pair families") {
  CHECK(pair_families().size() == 9);
  CHECK(code_of([] { pair_family("nope"); }) == ErrorCode::ConfigError);
  for (const PairFamily& fam : pair_families()) CHECK(fam.make(std::max<std::size_t>(fam.min_nodes, 5)).coincide() == fam.coincide);
}

TEST_CASE("characterization verification") {
  const VerifySummary a = verify_characterization(1, 20);
  CHECK(a.trials.size() == 20);
  CHECK(a.consistent == 20);
  const VerifySummary b = verify_characterization(1, 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.trials[i].family == b.trials[i].family);
    CHECK(a.trials[i].nodes == b.trials[i].nodes);
    CHECK(a.trials[i].witness.defect == b.trials[i].witness.defect);
  }
  CHECK(code_of([] { verify_characterization(1, 0); }) == ErrorCode::BadSize);
}

TEST_CASE("golden examples") {
  const auto all = worked_examples("all");
  CHECK(all.size() == example_names().size());
  for (const ExampleReport& r : all) {
    CAPTURE(format_report({r}));
    CHECK(r.passed());
  }
  const auto one = worked_examples("not-normal");
  REQUIRE(one.size() == 1);
  CHECK(one.front().example == "not-normal");
  CHECK(code_of([] { worked_examples("missing"); }) == ErrorCode::UnknownExample);
}
