#pragma once

// Command-line front end: JSON experiment configs in, JSON/CSV/reports out.
//
//   gsplit analyze --config cfg.json [--seed N] [--out PATH]
//   gsplit sweep   --config cfg.json [--seed N] [--eps X] [--out PATH]
//   gsplit demo    [NAME|all]
//   gsplit verify  [--seed N] [--trials K]
//
// Exit status: 0 success, 1 check failure, 2 configuration error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsplit/experiments.hpp"
#include "gsplit/graphs.hpp"
#include "gsplit/splitting.hpp"
#include "gsplit/subspaces.hpp"

namespace gsplit {

enum class FactorChoice { qr, incidence };

struct ExperimentConfig {
  GraphPair pair;
  ProductSubspace spaces;
  std::vector<double> thetas;
  double eps = kDefaultEps;
  std::size_t k_max = kDefaultMaxIterations;
  std::uint64_t seed = 0;
  std::optional<Vector> v0;  // empty means "random"
  FactorChoice factor = FactorChoice::qr;
};

/// Parses a config document. Every failure is a ConfigError naming the JSON
/// field path (e.g. "spaces[2].normal") or the line and column of a syntax
/// error. `seed_override` replaces the config seed before random subspaces
/// are drawn.
ExperimentConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override = std::nullopt);

SplittingOperator build_operator(const ExperimentConfig& config);
/// The explicit v0, or a standard-normal vector from the config seed.
Vector initial_vector(const ExperimentConfig& config, std::size_t dimension);

/// Analysis document: certificates, sorted eigenvalues, rho1, fix_dim and,
/// for two nodes, the Friedrichs cosine of the two subspaces.
std::string cmd_analyze(const ExperimentConfig& config);
/// CSV with header theta,k_stop,rho1_predicted,rho1_measured; NA for missing values.
std::string cmd_sweep(const ExperimentConfig& config);

/// Formats with 12 significant digits.
std::string format_number(double x);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsplit
