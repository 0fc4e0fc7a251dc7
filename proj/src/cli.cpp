#include "gsplit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "gsplit/catalog.hpp"
#include "gsplit/errors.hpp"
#include "gsplit/random.hpp"

namespace gsplit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ConfigError, (path.empty() ? std::string("<root>") : path) + ": " + message);
}

std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(child(path, key), "missing required field");
  return *it;
}

std::size_t as_count(const json& j, const std::string& path, std::size_t min = 0) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min))
    fail(path, "expected an integer >= " + std::to_string(min));
  return j.get<std::size_t>();
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vector as_vector(const json& j, const std::string& path, std::size_t length) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (j.size() != length)
    fail(path, "expected " + std::to_string(length) + " entries, got " + std::to_string(j.size()));
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_real(j[i], index(path, i)));
  return v;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(child(path, key), "unknown field");
}

// Library errors raised while turning a fragment into an object are reported
// against the fragment's path.
template <typename F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

AlgorithmicGraph parse_graph(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("preset")) {
    reject_unknown(j, {"preset", "n"}, path);
    const json& name = j["preset"];
    if (!name.is_string()) fail(child(path, "preset"), "expected a preset name");
    const std::size_t n = as_count(require(j, "n", path), child(path, "n"));
    return at_path(path, [&] { return preset(parse_preset(name.get<std::string>()), n); });
  }
  reject_unknown(j, {"n", "edges"}, path);
  const std::size_t n = as_count(require(j, "n", path), child(path, "n"));
  const json& edges = require(j, "edges", path);
  const std::string epath = child(path, "edges");
  if (!edges.is_array()) fail(epath, "expected an array of [i, j] pairs");
  std::vector<std::pair<long, long>> pairs;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const json& e = edges[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail(index(epath, k), "expected a pair of integers");
    pairs.emplace_back(e[0].get<long>(), e[1].get<long>());
  }
  return at_path(path, [&] { return AlgorithmicGraph::validate(n, pairs); });
}

Subspace parse_subspace(const json& j, const std::string& path, std::size_t d, std::uint64_t default_seed) {
  if (!j.is_object()) fail(path, "expected an object");
  const json& kind_field = require(j, "kind", path);
  if (!kind_field.is_string()) fail(child(path, "kind"), "expected a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "full") {
    reject_unknown(j, {"kind"}, path);
    return Subspace::full(d);
  }
  if (kind == "trivial") {
    reject_unknown(j, {"kind"}, path);
    return Subspace::trivial(d);
  }
  if (kind == "hyperplane") {
    reject_unknown(j, {"kind", "normal"}, path);
    const Vector normal = as_vector(require(j, "normal", path), child(path, "normal"), d);
    return at_path(path, [&] { return Subspace::hyperplane(normal); });
  }
  if (kind == "span") {
    reject_unknown(j, {"kind", "vectors"}, path);
    const json& vs = require(j, "vectors", path);
    const std::string vpath = child(path, "vectors");
    if (!vs.is_array()) fail(vpath, "expected an array of vectors");
    std::vector<Vector> gens;
    for (std::size_t k = 0; k < vs.size(); ++k) gens.push_back(as_vector(vs[k], index(vpath, k), d));
    return Subspace::from_generators(d, gens);
  }
  if (kind == "random") {
    reject_unknown(j, {"kind", "dim", "seed"}, path);
    const std::size_t dim = as_count(require(j, "dim", path), child(path, "dim"));
    if (dim > d) fail(child(path, "dim"), "exceeds the ambient dimension " + std::to_string(d));
    std::uint64_t seed = default_seed;
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) fail(child(path, "seed"), "expected a nonnegative integer");
      seed = j["seed"].get<std::uint64_t>();
    }
    return Subspace::random(d, dim, seed);
  }
  fail(child(path, "kind"), "unknown subspace kind '" + kind + "' (span, hyperplane, random, full, trivial)");
}

std::vector<double> parse_thetas(const json& j, const std::string& path) {
  std::vector<double> thetas;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) thetas.push_back(as_real(j[k], index(path, k)));
  } else if (j.is_object()) {
    reject_unknown(j, {"start", "stop", "step"}, path);
    const double start = as_real(require(j, "start", path), child(path, "start"));
    const double stop = as_real(require(j, "stop", path), child(path, "stop"));
    const double step = as_real(require(j, "step", path), child(path, "step"));
    if (!(step > 0.0)) fail(child(path, "step"), "must be positive");
    thetas = theta_grid(start, stop, step);
  } else {
    fail(path, "expected a list or {start, stop, step}");
  }
  for (std::size_t k = 0; k < thetas.size(); ++k)
    if (!(thetas[k] > 0.0 && thetas[k] < 2.0)) fail(index(path, k), "relaxation parameter outside (0, 2)");
  return thetas;
}

std::string location(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

std::string read_config(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ExperimentConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "syntax error at " + location(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail("", "expected a JSON object");
  reject_unknown(doc, {"graph", "subgraph", "ambient", "spaces", "thetas", "eps", "k_max", "seed", "v0", "factor"},
                 "");

  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    seed = doc["seed"].get<std::uint64_t>();
  }
  if (seed_override) seed = *seed_override;

  const AlgorithmicGraph g = parse_graph(require(doc, "graph", ""), "graph");
  const AlgorithmicGraph gp = doc.contains("subgraph") ? parse_graph(doc["subgraph"], "subgraph") : g;
  GraphPair pair = at_path("subgraph", [&] { return GraphPair::make(g, gp); });
  const std::size_t n = pair.node_count();

  const std::size_t d = as_count(require(doc, "ambient", ""), "ambient", 1);
  const json& sj = require(doc, "spaces", "");
  if (!sj.is_array()) fail("spaces", "expected an array of subspaces");
  if (sj.size() != n)
    fail("spaces", "graph has " + std::to_string(n) + " nodes but " + std::to_string(sj.size()) + " subspaces given");
  std::vector<Subspace> factors;
  for (std::size_t i = 0; i < n; ++i) factors.push_back(parse_subspace(sj[i], index("spaces", i), d, seed + i));

  std::vector<double> thetas = doc.contains("thetas") ? parse_thetas(doc["thetas"], "thetas")
                                                      : theta_grid(0.05, 1.95, 0.05);

  double eps = kDefaultEps;
  if (doc.contains("eps")) {
    eps = as_real(doc["eps"], "eps");
    if (!(eps > 0.0)) fail("eps", "must be positive");
  }
  std::size_t k_max = kDefaultMaxIterations;
  if (doc.contains("k_max")) k_max = as_count(doc["k_max"], "k_max", 1);

  std::optional<Vector> v0;
  if (doc.contains("v0")) {
    const json& vj = doc["v0"];
    if (vj.is_string()) {
      if (vj.get<std::string>() != "random") fail("v0", "expected \"random\" or a vector");
    } else {
      v0 = as_vector(vj, "v0", d * (n - 1));
    }
  }

  FactorChoice factor = FactorChoice::qr;
  if (doc.contains("factor")) {
    const json& fj = doc["factor"];
    if (!fj.is_string() || (fj != "qr" && fj != "incidence")) fail("factor", "expected \"qr\" or \"incidence\"");
    factor = fj == "qr" ? FactorChoice::qr : FactorChoice::incidence;
    if (factor == FactorChoice::incidence && gp.edge_count() + 1 != n)
      fail("factor", "the incidence factor needs a subgraph that is a tree");
  }

  return ExperimentConfig{std::move(pair), ProductSubspace(std::move(factors)), std::move(thetas), eps, k_max, seed,
                          std::move(v0), factor};
}

SplittingOperator build_operator(const ExperimentConfig& config) {
  if (config.factor == FactorChoice::incidence)
    return SplittingOperator::build(config.pair, config.spaces, tree_incidence_factor(config.pair.subgraph()));
  return SplittingOperator::build(config.pair, config.spaces);
}

Vector initial_vector(const ExperimentConfig& config, std::size_t dimension) {
  if (config.v0) {
    if (config.v0->size() != dimension) throw Error(ErrorCode::DimensionMismatch, "v0 has the wrong length");
    return *config.v0;
  }
  Rng rng(config.seed);
  return gaussian_vector(dimension, rng);
}

std::string cmd_analyze(const ExperimentConfig& config) {
  const SplittingOperator op = build_operator(config);
  const SpectralReport sr = spectral_report(op.matrix());
  const Certificates c = certificates(op.matrix());
  json doc;
  doc["nodes"] = op.node_count();
  doc["ambient"] = op.ambient();
  doc["normality_defect"] = rounded(c.normality_defect);
  doc["iso_defect"] = rounded(c.iso_defect);
  doc["isometry_defect"] = rounded(c.isometry_defect);
  doc["is_normal"] = c.is_normal;
  doc["is_iso_averaged"] = c.is_iso_averaged;
  json eig = json::array();
  for (const Complex& l : sr.eigenvalues) eig.push_back({{"re", rounded(l.real())}, {"im", rounded(l.imag())}});
  doc["eigenvalues"] = std::move(eig);
  doc["rho1"] = rounded(sr.rho1);
  doc["fix_dim"] = sr.fix_dim;
  doc["fix_count_mismatch"] = sr.fix_count_mismatch;
  if (op.node_count() == 2) doc["friedrichs_cosine"] = rounded(friedrichs_cosine(config.spaces[0], config.spaces[1]));
  return doc.dump(2) + "\n";
}

std::string cmd_sweep(const ExperimentConfig& config) {
  const SplittingOperator op = build_operator(config);
  const Vector v0 = initial_vector(config, op.dimension());
  const std::vector<SweepRecord> records = theta_sweep(op.matrix(), config.thetas, v0, config.eps, config.k_max);
  std::ostringstream os;
  os << "theta,k_stop,rho1_predicted,rho1_measured\n";
  for (const SweepRecord& r : records) {
    os << format_number(r.theta) << ',' << (r.k_stop ? std::to_string(*r.k_stop) : "NA") << ','
       << format_number(r.rho1_predicted) << ',' << (r.rho1_measured ? format_number(*r.rho1_measured) : "NA") << '\n';
  }
  return os.str();
}

namespace {

std::string verify_report(const VerifySummary& summary) {
  std::ostringstream os;
  for (std::size_t i = 0; i < summary.trials.size(); ++i) {
    const VerifyTrial& t = summary.trials[i];
    os << "trial " << i + 1 << ": " << t.family << " n=" << t.nodes << " d=" << t.ambient
       << (t.coincide ? " G=G'" : " G!=G'") << " iso_on_random_spaces=" << (t.iso_on_random_spaces ? "yes" : "no")
       << " witness=";
    if (t.witness.found)
      os << "node " << *t.witness.index + 1 << " (defect " << format_number(t.witness.defect) << ")";
    else
      os << "none";
    os << (t.consistent ? "  consistent" : "  INCONSISTENT") << '\n';
  }
  os << summary.consistent << "/" << summary.trials.size() << " trials consistent with: iso-averaged for all "
     << "subspaces iff G = G'\n";
  return os.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + out_path + "'");
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-based splitting operators on linear subspaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::string example = "all";
  std::uint64_t verify_seed = 1;
  std::size_t trials = 20;

  CLI::App* analyze = app.add_subcommand("analyze", "Certificates and spectrum of the operator in a config");
  CLI::App* sweep = app.add_subcommand("sweep", "Relaxation sweep as CSV");
  for (CLI::App* sub : {analyze, sweep}) {
    sub->add_option("--config", config_path, "Config JSON file, or - for standard input")->required();
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--out", out_path, "Write output to this file");
  }
  sweep->add_option("--eps", eps, "Override the stopping tolerance");
  CLI::App* demo = app.add_subcommand("demo", "Reproduce the worked examples");
  demo->add_option("name", example, "Example name or all");
  demo->add_option("--out", out_path, "Write the report to this file");
  CLI::App* verify = app.add_subcommand("verify", "Randomized check of the G = G' characterization");
  verify->add_option("--seed", verify_seed, "Seed of the trial stream");
  verify->add_option("--trials", trials, "Number of trials");
  verify->add_option("--out", out_path, "Write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze || *sweep) {
      ExperimentConfig config = parse_config(read_config(config_path), seed);
      if (eps) {
        if (!(*eps > 0.0)) throw Error(ErrorCode::ConfigError, "--eps must be positive");
        config.eps = *eps;
      }
      try {
        emit(*analyze ? cmd_analyze(config) : cmd_sweep(config), out_path, out);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::BadFactor || e.code() == ErrorCode::DimensionMismatch) {
          err << e.what() << '\n';
          return 2;
        }
        throw;
      }
      return 0;
    }
    if (*demo) {
      std::vector<ExampleReport> reports;
      try {
        reports = worked_examples(example);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownExample) throw;
        err << e.what() << "; available:";
        for (const std::string& name : example_names()) err << ' ' << name;
        err << " all\n";
        return 2;
      }
      emit(format_report(reports), out_path, out);
      return std::all_of(reports.begin(), reports.end(), [](const ExampleReport& r) { return r.passed(); }) ? 0 : 1;
    }
    if (trials == 0) {
      err << "--trials must be at least 1\n";
      return 2;
    }
    const VerifySummary summary = verify_characterization(verify_seed, trials);
    emit(verify_report(summary), out_path, out);
    return summary.consistent == summary.trials.size() ? 0 : 1;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  }
}

}  // namespace gsplit
