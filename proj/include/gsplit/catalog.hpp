#pragma once

// Golden reproductions of the worked examples and counterexamples. Each
// check carries its own expected value and tolerance.

#include <string>
#include <string_view>
#include <vector>

namespace gsplit {

enum class Comparison { near, greater_than, at_most };

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::near;
  bool passed = false;
};

struct ExampleReport {
  std::string example;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Catalog order: not-normal, relaxed-iso-averaged, geometric, parallel-down,
/// biparallel, malitsky-tam, dr-rate.
const std::vector<std::string>& example_names();

/// Runs one example by name, or all of them for "all". Throws UnknownExample.
std::vector<ExampleReport> worked_examples(std::string_view selection = "all");

std::string format_report(const std::vector<ExampleReport>& reports);

}  // namespace gsplit
