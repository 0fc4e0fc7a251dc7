#include "gsplit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "gsplit/errors.hpp"

namespace gsplit {

namespace {

Vector project_onto(const Matrix& basis, std::span<const double> x) {
  if (basis.cols() == 0) return Vector(x.size(), 0.0);
  return gsplit::matvec(basis, matvec_transpose(basis, x));
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 2.0))
    throw Error(ErrorCode::DomainError, "relaxation parameter must lie in (0, 2), got " + std::to_string(theta));
}

SweepRecord sweep_one(const Matrix& t, double theta, std::span<const double> v0, double eps, std::size_t k_max,
                      std::optional<double> iso_rho1) {
  const ConvergenceTrace trace = converge(t, theta, v0, eps, k_max);
  SweepRecord rec;
  rec.theta = theta;
  rec.k_stop = trace.k_stop;
  rec.rho1_measured = trace.measured_rate;
  rec.rho1_predicted = iso_rho1 ? predicted_rate(std::min(*iso_rho1, 1.0), theta)
                                : spectral_report(relax(t, theta)).rho1;
  return rec;
}

std::optional<double> iso_radius(const Matrix& t) {
  if (!certificates(t).is_iso_averaged) return std::nullopt;
  const SpectralReport sr = spectral_report(t);
  // The closed form assumes some eigenvalue other than 1; for T = I it would give |1 - theta|.
  if (sr.unit_eigenvalues == sr.eigenvalues.size()) return std::nullopt;
  return sr.rho1;
}

}  // namespace

ConvergenceTrace converge(const Matrix& t, double theta, std::span<const double> v0, double eps, std::size_t k_max) {
  require_theta(theta);
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "eps must be positive");
  if (v0.size() != t.rows()) throw Error(ErrorCode::DimensionMismatch, "starting point has the wrong length");

  ConvergenceTrace trace;
  trace.theta = theta;
  trace.limit = project_onto(fixed_space(t), v0);
  const Matrix relaxed = relax(t, theta);

  Vector v(v0.begin(), v0.end());
  double dist = distance(v, trace.limit);
  trace.points.push_back({0, dist});
  if (dist < eps) trace.k_stop = 0;
  for (std::size_t k = 1; !trace.k_stop && k <= k_max; ++k) {
    v = gsplit::matvec(relaxed, v);
    dist = distance(v, trace.limit);
    trace.points.push_back({k, dist});
    if (dist < eps) trace.k_stop = k;
  }
  trace.measured_rate = fit_rate(trace.points);
  trace.last = std::move(v);
  return trace;
}

ConvergenceTrace converge(const SplittingOperator& op, double theta, std::span<const double> v0, double eps,
                          std::size_t k_max) {
  return converge(op.matrix(), theta, v0, eps, k_max);
}

std::optional<double> fit_rate(std::span<const TracePoint> points) {
  std::vector<TracePoint> usable;
  for (const TracePoint& p : points)
    if (p.dist > kRateFitFloor) usable.push_back(p);
  const std::size_t first = usable.size() / 2;
  const std::size_t count = usable.size() - first;
  if (count < 2) return std::nullopt;

  double mk = 0.0, ml = 0.0;
  for (std::size_t i = first; i < usable.size(); ++i) {
    mk += static_cast<double>(usable[i].k);
    ml += std::log(usable[i].dist);
  }
  mk /= static_cast<double>(count);
  ml /= static_cast<double>(count);
  double skk = 0.0, skl = 0.0;
  for (std::size_t i = first; i < usable.size(); ++i) {
    const double dk = static_cast<double>(usable[i].k) - mk;
    skk += dk * dk;
    skl += dk * (std::log(usable[i].dist) - ml);
  }
  if (skk == 0.0) return std::nullopt;
  return std::exp(skl / skk);
}

std::vector<SweepRecord> theta_sweep(const Matrix& t, std::span<const double> thetas, std::span<const double> v0,
                                     double eps, std::size_t k_max) {
  for (double theta : thetas) require_theta(theta);
  const std::optional<double> rho1 = iso_radius(t);
  std::vector<SweepRecord> out(thetas.size());
  const long count = static_cast<long>(thetas.size());
  // Each run writes only its own slot; exceptions cannot cross the parallel
  // region, so the first one is captured and rethrown afterwards.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      out[idx] = sweep_one(t, thetas[idx], v0, eps, k_max, rho1);
    } catch (...) {
#pragma omp critical(gsplit_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<SweepRecord> theta_sweep_serial(const Matrix& t, std::span<const double> thetas,
                                            std::span<const double> v0, double eps, std::size_t k_max) {
  for (double theta : thetas) require_theta(theta);
  const std::optional<double> rho1 = iso_radius(t);
  std::vector<SweepRecord> out;
  out.reserve(thetas.size());
  for (double theta : thetas) out.push_back(sweep_one(t, theta, v0, eps, k_max, rho1));
  return out;
}

std::vector<double> theta_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::DomainError, "grid step must be positive");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double theta = start + static_cast<double>(i) * step;
    if (theta > stop + step * 1e-9) break;
    grid.push_back(theta);
  }
  return grid;
}

Vector iterate_norms(const Matrix& t, double theta, std::span<const double> x, std::size_t k_max) {
  const Matrix relaxed = relax(t, theta);
  Vector norms;
  norms.reserve(k_max + 1);
  Vector v(x.begin(), x.end());
  norms.push_back(norm(v));
  for (std::size_t k = 1; k <= k_max; ++k) {
    v = gsplit::matvec(relaxed, v);
    norms.push_back(norm(v));
  }
  return norms;
}

double symmetry_check(const Matrix& t, std::span<const double> x, std::span<const double> thetas, std::size_t k_max) {
  double worst = 0.0;
  for (double theta : thetas) {
    require_theta(theta);
    const Vector a = iterate_norms(t, theta, x, k_max);
    const Vector b = iterate_norms(t, 2.0 - theta, x, k_max);
    for (std::size_t k = 0; k <= k_max; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  return worst;
}

double midpoint_convexity_gap(const Matrix& t, std::span<const double> x, std::size_t k, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error(ErrorCode::DomainError, "grid must be sorted");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    const double fa = iterate_norms(t, a, x, k)[k];
    const double fb = iterate_norms(t, b, x, k)[k];
    const double fm = iterate_norms(t, 0.5 * (a + b), x, k)[k];
    worst = std::max(worst, fm - 0.5 * (fa + fb));
  }
  return grid.size() < 2 ? 0.0 : worst;
}

double convexity_check(const Matrix& t, std::span<const double> x, std::size_t k, std::span<const double> grid) {
  const Certificates c = certificates(t);
  if (!c.is_normal)
    throw Error(ErrorCode::NotNormal, "normality defect " + std::to_string(c.normality_defect) + " above threshold");
  return midpoint_convexity_gap(t, x, k, grid);
}

bool monotonicity_check(const Matrix& t, double theta, std::span<const double> x, std::size_t k_max) {
  require_theta(theta);
  if (!certificates(t).is_iso_averaged) throw Error(ErrorCode::NotIsoAveraged, "monotonicity needs an iso-averaged map");
  const Matrix fix = fixed_space(t);
  Matrix excluded = fix;
  if (theta == 1.0) excluded = range_basis(hstack(fix, null_space(t, kRankTol, 1.0)), kRankTol, 1.0);
  const double xn = norm(x);
  if (xn == 0.0 || distance(x, project_onto(excluded, x)) <= 1e-10 * xn)
    throw Error(ErrorCode::ExcludedInput, theta == 1.0 ? "x lies in Fix T + ker T" : "x lies in Fix T");

  const Vector limit = project_onto(fix, x);
  const Matrix relaxed = relax(t, theta);
  Vector v(x.begin(), x.end());
  double previous = xn;
  for (std::size_t k = 0; k < k_max && distance(v, limit) > 1e-12; ++k) {
    v = gsplit::matvec(relaxed, v);
    const double current = norm(v);
    if (!(current < previous)) return false;
    previous = current;
  }
  return true;
}

WitnessResult witness_search(const GraphPair& pair, std::size_t d) {
  WitnessResult result;
  const std::size_t n = pair.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const SplittingOperator op = SplittingOperator::build(pair, coordinate_product(n, i, d));
    const double defect = certificates(op.matrix()).iso_defect;
    if (defect > 1e-6) return WitnessResult{true, i, defect};
    result.defect = std::max(result.defect, defect);
  }
  return result;
}

namespace {

GraphPair parallel_down_plus_edge(std::size_t n) {
  const AlgorithmicGraph gp = preset(Preset::parallel_down, n);
  std::vector<Edge> edges = gp.edges();
  edges.push_back({0, 1});
  return GraphPair::make(AlgorithmicGraph::from_edges(n, std::move(edges)), gp);
}

const std::vector<PairFamily> kFamilies = {
    {"sequential", 2, true, [](std::size_t n) { return GraphPair::same(preset(Preset::sequential, n)); }},
    {"ring", 3, true, [](std::size_t n) { return GraphPair::same(preset(Preset::ring, n)); }},
    {"parallel_up", 2, true, [](std::size_t n) { return GraphPair::same(preset(Preset::parallel_up, n)); }},
    {"parallel_down", 2, true, [](std::size_t n) { return GraphPair::same(preset(Preset::parallel_down, n)); }},
    {"biparallel", 3, true, [](std::size_t n) { return GraphPair::same(preset(Preset::biparallel, n)); }},
    {"complete", 2, true, [](std::size_t n) { return GraphPair::same(preset(Preset::complete, n)); }},
    {"parallel_down+edge/parallel_down", 4, false, parallel_down_plus_edge},
    {"biparallel/parallel_up", 4, false,
     [](std::size_t n) { return GraphPair::make(preset(Preset::biparallel, n), preset(Preset::parallel_up, n)); }},
    {"ring/sequential", 3, false,
     [](std::size_t n) { return GraphPair::make(preset(Preset::ring, n), preset(Preset::sequential, n)); }},
};

}  // namespace

const std::vector<PairFamily>& pair_families() { return kFamilies; }

const PairFamily& pair_family(std::string_view name) {
  for (const PairFamily& f : kFamilies)
    if (f.name == name) return f;
  throw Error(ErrorCode::ConfigError, "unknown graph pair family '" + std::string(name) + "'");
}

RandomConfig random_configuration(const PairFamily& family, Rng& rng, const RandomConfigOptions& options) {
  const std::size_t n = rng.uniform_index(family.min_nodes, std::max(family.min_nodes, options.max_nodes));
  const std::size_t d = rng.uniform_index(options.min_ambient, options.max_ambient);
  std::vector<Subspace> factors;
  factors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.uniform_index(0, d);
    factors.push_back(Subspace::random(d, k, rng.next_u64()));
  }
  return RandomConfig{family.make(n), ProductSubspace(std::move(factors))};
}

VerifyTrial verify_trial(const PairFamily& family, Rng& rng) {
  const RandomConfig cfg = random_configuration(family, rng, {6, 1, 3});
  VerifyTrial trial;
  trial.family = family.name;
  trial.nodes = cfg.pair.node_count();
  trial.ambient = cfg.spaces.ambient();
  trial.coincide = cfg.pair.coincide();
  const SplittingOperator op = SplittingOperator::build(cfg.pair, cfg.spaces);
  trial.iso_on_random_spaces = certificates(op.matrix()).is_iso_averaged;
  trial.witness = witness_search(cfg.pair, trial.ambient);
  trial.consistent = trial.coincide ? (trial.iso_on_random_spaces && !trial.witness.found) : trial.witness.found;
  return trial;
}

VerifySummary verify_characterization(std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw Error(ErrorCode::BadSize, "verify needs at least one trial");
  Rng rng(seed);
  VerifySummary summary;
  const auto& families = pair_families();
  for (std::size_t t = 0; t < trials; ++t) {
    summary.trials.push_back(verify_trial(families[t % families.size()], rng));
    if (summary.trials.back().consistent) ++summary.consistent;
  }
  return summary;
}

VerifySummary verify_family(const PairFamily& family, std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw Error(ErrorCode::BadSize, "verify needs at least one trial");
  Rng rng(seed);
  VerifySummary summary;
  for (std::size_t t = 0; t < trials; ++t) {
    summary.trials.push_back(verify_trial(family, rng));
    if (summary.trials.back().consistent) ++summary.consistent;
  }
  return summary;
}

}  // namespace gsplit
