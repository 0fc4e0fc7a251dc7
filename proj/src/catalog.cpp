#include "gsplit/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gsplit/errors.hpp"
#include "gsplit/experiments.hpp"
#include "gsplit/graphs.hpp"
#include "gsplit/splitting.hpp"
#include "gsplit/subspaces.hpp"

namespace gsplit {

namespace {

CheckResult check(std::string name, double measured, double expected, double tolerance,
                  Comparison cmp = Comparison::near) {
  CheckResult r{std::move(name), measured, expected, tolerance, cmp, false};
  switch (cmp) {
    case Comparison::near: r.passed = std::abs(measured - expected) <= tolerance; break;
    case Comparison::greater_than: r.passed = measured > expected; break;
    case Comparison::at_most: r.passed = measured <= expected; break;
  }
  return r;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(a - b);
}

// f(theta) = ||T_theta^2 x|| for the nilpotent Jordan block.
ExampleReport not_normal() {
  const Matrix t{{0.0, 1.0}, {0.0, 0.0}};
  const Vector x{0.0, 1.0};
  auto f = [&](double theta) { return iterate_norms(t, theta, x, 2)[2]; };
  ExampleReport rep{"not-normal", {}};
  rep.checks.push_back(check("f(1/2)", f(0.5), std::sqrt(5.0) / 4.0, 1e-12));
  rep.checks.push_back(check("(f(0)+f(1))/2", 0.5 * (f(0.0) + f(1.0)), 0.5, 1e-12));
  const double gap = midpoint_convexity_gap(t, x, 2, std::vector<double>{0.0, 1.0});
  rep.checks.push_back(check("midpoint gap", gap, std::sqrt(5.0) / 4.0 - 0.5, 1e-12));
  rep.checks.push_back(check("midpoint gap positive", gap, 0.0, 0.0, Comparison::greater_than));
  rep.checks.push_back(check("normality defect", certificates(t).normality_defect, 1.0, 1e-12));
  return rep;
}

ExampleReport relaxed_iso_averaged() {
  const Matrix t = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}}).projector();
  ExampleReport rep{"relaxed-iso-averaged", {}};
  rep.checks.push_back(check("iso defect of T", certificates(t).iso_defect, 0.0, 1e-12));
  double shape = 0.0;
  double classification_errors = 0.0;
  double worst_normality = 0.0;
  for (double theta : {-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    const Matrix relaxed = relax(t, theta);
    const Vector diag{1.0, 1.0 - theta};
    shape = std::max(shape, max_abs_diff(relaxed, Matrix::diagonal(diag)));
    const Certificates c = certificates(relaxed);
    const bool iso = c.iso_defect <= 1e-12;
    if (iso != (theta == 0.0 || theta == 1.0)) classification_errors += 1.0;
    worst_normality = std::max(worst_normality, c.normality_defect);
  }
  rep.checks.push_back(check("T_theta - Diag(1, 1-theta)", shape, 0.0, 0.0));
  rep.checks.push_back(check("iso iff theta in {0,1} (misclassified)", classification_errors, 0.0, 0.0));
  rep.checks.push_back(check("normality defect over theta", worst_normality, 0.0, 1e-12));
  rep.checks.push_back(check("iso defect at theta=1/2", certificates(relax(t, 0.5)).iso_defect, 0.5, 1e-12));
  return rep;
}

ExampleReport geometric() {
  const Vector a1{-1.0, 6.0}, a2{-3.0, 1.0}, a3{-3.0, -4.0};
  const Vector v0{1.0, -10.0, -8.0, 1.0};
  auto det = [](const Vector& u, const Vector& w) { return u[0] * w[1] - u[1] * w[0]; };
  const double mu = det(a3, a2) / det(a1, a2);

  const AlgorithmicGraph seq = preset(Preset::sequential, 3);
  const SplittingOperator op =
      SplittingOperator::build(GraphPair::same(seq),
                               ProductSubspace({Subspace::hyperplane(a1), Subspace::hyperplane(a2),
                                                Subspace::hyperplane(a3)}),
                               tree_incidence_factor(seq));
  const Matrix& t = op.matrix();

  const Vector dir{mu * a1[0], mu * a1[1], a3[0], a3[1]};
  const double coef = (mu * dot(a1, std::span(v0).first(2)) + dot(a3, std::span(v0).last(2))) /
                      (mu * mu * dot(a1, a1) + dot(a3, a3));
  Vector e(4);
  for (std::size_t i = 0; i < 4; ++i) e[i] = coef * dir[i];

  ExampleReport rep{"geometric", {}};
  rep.checks.push_back(check("mu", mu, -15.0 / 17.0, 1e-15));
  const Matrix fix = fixed_space(t);
  rep.checks.push_back(check("dim Fix T", static_cast<double>(fix.cols()), 1.0, 0.0));
  if (fix.cols() == 1) {
    const double c = std::abs(dot(fix.column(0), dir)) / norm(dir);
    rep.checks.push_back(check("sin angle(Fix T, (mu a1, a3))", std::sqrt(std::max(0.0, 1.0 - c * c)), 0.0, 1e-8));
  }
  rep.checks.push_back(check("iso defect", certificates(t).iso_defect, 0.0, 1e-9));

  const ConvergenceTrace run = converge(t, 1.0, v0, 1e-9, 5000);
  Vector diff = run.last;
  for (std::size_t i = 0; i < 4; ++i) diff[i] -= e[i];
  rep.checks.push_back(check("||P_Fix v0 - P_E v0||", norm(axpy(-1.0, e, run.limit)), 0.0, 1e-10));
  rep.checks.push_back(check("||T^k v0 - P_E v0|| within 5000 iterations", norm(diff), 1e-8, 0.0, Comparison::at_most));

  const double eps = 1e-8;
  const std::vector<double> grid = theta_grid(0.1, 1.9, 0.1);
  std::vector<double> thetas = grid;
  thetas.push_back(0.2);
  thetas.push_back(1.8);
  const auto sweep = theta_sweep(t, thetas, v0, eps, kDefaultMaxIterations);
  auto k_of = [&](double theta) {
    for (const SweepRecord& r : sweep)
      if (std::abs(r.theta - theta) < 1e-12 && r.k_stop) return static_cast<double>(*r.k_stop);
    return std::numeric_limits<double>::infinity();
  };
  rep.checks.push_back(check("|k(0.2) - k(1.8)|", std::abs(k_of(0.2) - k_of(1.8)), 1.0, 0.0, Comparison::at_most));
  double k_min = std::numeric_limits<double>::infinity();
  for (const SweepRecord& r : sweep)
    if (r.k_stop) k_min = std::min(k_min, static_cast<double>(*r.k_stop));
  rep.checks.push_back(check("k(1) - min_theta k(theta)", k_of(1.0) - k_min, 0.0, 0.0));
  const Vector centered = axpy(-1.0, e, v0);
  rep.checks.push_back(check("distance symmetry theta=0.2 vs 1.8 (k<=50)",
                             symmetry_check(t, centered, std::vector<double>{0.2}, 50), 1e-8 * (1.0 + norm(v0)),
                             0.0, Comparison::at_most));
  return rep;
}

ExampleReport parallel_down() {
  const std::size_t n = 4;
  const auto& fam = pair_family("parallel_down+edge/parallel_down");
  const GraphPair pair = fam.make(n);
  const SplittingOperator op =
      SplittingOperator::build(pair, full_product(n, 1), tree_incidence_factor(pair.subgraph()));
  // n = 4 instance of the displayed block formula (one trailing block of size n-3).
  const double s = 1.0 / static_cast<double>(n - 1);
  const Matrix expected{{s * 0.5, 0.0, -s}, {s * 0.5, s * 1.5, -s}, {-s, 0.0, s * 2.0}};
  ExampleReport rep{"parallel-down", {}};
  rep.checks.push_back(check("C - closed form", max_abs_diff(op.correction(), expected), 0.0, 1e-10));
  rep.checks.push_back(check("normality defect", certificates(op.matrix()).normality_defect, 1e-3, 0.0,
                             Comparison::greater_than));
  return rep;
}

ExampleReport biparallel() {
  const std::size_t n = 4;
  const GraphPair pair = pair_family("biparallel/parallel_up").make(n);
  ExampleReport rep{"biparallel", {}};
  for (std::size_t d : {1u, 2u}) {
    const SplittingOperator op =
        SplittingOperator::build(pair, full_product(n, d), tree_incidence_factor(pair.subgraph()));
    const Matrix expected = kron_lift(Matrix{{0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.0}}, d);
    const std::string tag = " (d=" + std::to_string(d) + ")";
    rep.checks.push_back(check("C - blockdiag(I/2, 0)" + tag, max_abs_diff(op.correction(), expected), 0.0, 1e-10));
    const SpectralReport sr = spectral_report(op.matrix());
    rep.checks.push_back(check("normality defect" + tag, sr.normality_defect, 1e-9, 0.0, Comparison::at_most));
    rep.checks.push_back(check("iso defect" + tag, sr.iso_defect, 1e-3, 0.0, Comparison::greater_than));
    rep.checks.push_back(check("circle defect of eigenvalue 1/2" + tag, sr.circle_defect, 0.5, 1e-9));
  }
  return rep;
}

ExampleReport malitsky_tam() {
  ExampleReport rep{"malitsky-tam", {}};
  const auto& fam = pair_family("ring/sequential");
  for (std::size_t n : {3u, 4u, 5u}) {
    const GraphPair pair = fam.make(n);
    const SplittingOperator op =
        SplittingOperator::build(pair, full_product(n, 2), tree_incidence_factor(pair.subgraph()));
    const std::size_t m = n - 1;
    Matrix expected(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      expected(i, i) = 0.5;
      if (i + 1 < m) expected(i, i + 1) = -0.5;
    }
    expected(m - 1, 0) = -0.5;
    const std::string tag = " (n=" + std::to_string(n) + ")";
    rep.checks.push_back(
        check("C - componentwise pattern" + tag, max_abs_diff(op.correction(), kron_lift(expected, 2)), 0.0, 1e-10));
    rep.checks.push_back(check("iso defect, full spaces" + tag, certificates(op.matrix()).iso_defect, 1e-9, 0.0,
                               Comparison::at_most));
    const WitnessResult w = witness_search(pair, 2);
    rep.checks.push_back(
        check("coordinate witness defect" + tag, w.found ? w.defect : 0.0, 1e-6, 0.0, Comparison::greater_than));
  }
  return rep;
}

ExampleReport dr_rate_example() {
  const double alpha = std::numbers::pi / 3.0;
  const Subspace u1 = Subspace::from_generators(2, std::vector<Vector>{{1.0, 0.0}});
  const Subspace u2 = Subspace::from_generators(2, std::vector<Vector>{{std::cos(alpha), std::sin(alpha)}});
  const Matrix dr = douglas_rachford_map(u1, u2);
  const SplittingOperator op =
      SplittingOperator::build(GraphPair::same(preset(Preset::sequential, 2)), ProductSubspace({u1, u2}));
  ExampleReport rep{"dr-rate", {}};
  rep.checks.push_back(check("Friedrichs cosine", friedrichs_cosine(u1, u2), 0.5, 1e-12));
  rep.checks.push_back(check("||T - DR map||", max_abs_diff(op.matrix(), dr), 0.0, 1e-12));
  rep.checks.push_back(check("rho1(T)", spectral_report(op.matrix()).rho1, 0.5, 1e-9));
  const Vector v0{0.3, -1.1};
  for (double theta : {1.0, 0.5}) {
    const ConvergenceTrace tr = converge(op, theta, v0, 1e-12, kDefaultMaxIterations);
    const std::string tag = " (theta=" + std::to_string(theta).substr(0, 3) + ")";
    rep.checks.push_back(check("measured rate" + tag, tr.measured_rate.value_or(-1.0), dr_rate(u1, u2, theta), 0.02));
    rep.checks.push_back(check("rho1(T_theta) vs closed form" + tag, spectral_report(relax(op.matrix(), theta)).rho1,
                               predicted_rate(0.5, theta), 1e-9));
  }
  return rep;
}

using ExampleFn = ExampleReport (*)();

struct Entry {
  std::string name;
  ExampleFn run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"not-normal", not_normal},     {"relaxed-iso-averaged", relaxed_iso_averaged},
      {"geometric", geometric},       {"parallel-down", parallel_down},
      {"biparallel", biparallel},     {"malitsky-tam", malitsky_tam},
      {"dr-rate", dr_rate_example},
  };
  return table;
}

}  // namespace

bool ExampleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Entry& e : entries()) out.push_back(e.name);
    return out;
  }();
  return names;
}

std::vector<ExampleReport> worked_examples(std::string_view selection) {
  std::vector<ExampleReport> out;
  for (const Entry& e : entries())
    if (selection == "all" || selection == e.name) out.push_back(e.run());
  if (out.empty()) throw Error(ErrorCode::UnknownExample, "no example named '" + std::string(selection) + "'");
  return out;
}

std::string format_report(const std::vector<ExampleReport>& reports) {
  std::ostringstream os;
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  std::size_t passed = 0, total = 0;
  for (const ExampleReport& rep : reports) {
    for (const CheckResult& c : rep.checks) {
      ++total;
      if (c.passed) ++passed;
      os << (c.passed ? "[PASS] " : "[FAIL] ") << rep.example << ": " << c.name << "  measured=" << num(c.measured);
      switch (c.comparison) {
        case Comparison::near: os << " expected=" << num(c.expected) << " tol=" << num(c.tolerance); break;
        case Comparison::greater_than: os << " required > " << num(c.expected); break;
        case Comparison::at_most: os << " required <= " << num(c.expected); break;
      }
      os << '\n';
    }
  }
  os << passed << "/" << total << " checks passed\n";
  return os.str();
}

}  // namespace gsplit
