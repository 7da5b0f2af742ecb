#pragma once

// Experiment configuration and the batch subcommands behind the `emx` tool.
//
// Config files are JSON tagged with "schema": "emx-experiment/1". Rationals
// are written as "n/d" strings. Point lists are either arrays (ids, or "p/q"
// strings on the calkin-wilf domain) or {"range": [first, last]}.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "emx/analysis.hpp"
#include "emx/core.hpp"
#include "emx/scheme.hpp"

namespace emx::harness {

inline constexpr std::string_view kSchemaTag = "emx-experiment/1";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitResource = 3 };

/// Parse or validation problem; the message names the line/column or the
/// JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TowerSpec {
  std::size_t depth = 0;
  std::uint64_t seed = 0;
};

struct SchemeSpec {
  std::string kind;  // "enumeration", "tower" or "identity"
  std::size_t identity_arity = 1;
  std::optional<std::size_t> budget;
};

struct EvaluationSpec {
  std::vector<std::size_t> m_values;
  std::vector<Rational> epsilons;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Rational confidence{99, 100};
  bool per_trial = false;
};

struct VerifySpec {
  PointSet points;
  bool exhaustive = true;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

struct DescendSpec {
  PointSet x;
  PointSet y;
  ZReading reading = ZReading::kSuperset;
  std::uint64_t max_subsets = 1'000'000;
};

struct ExperimentConfig {
  Domain domain = Domain::finite(1);
  std::uint64_t max_enumeration = 1'000'000;
  TowerSpec tower;
  SchemeSpec scheme;
  std::size_t cap = 1'000'000;
  std::optional<FiniteSupportDistribution> distribution;
  std::optional<EvaluationSpec> evaluation;
  std::optional<VerifySpec> verify;
  std::optional<DescendSpec> descend;
  std::optional<PointSet> compress_points;
  std::string output_dir = ".";
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Tower and scheme described by the config.
SchemePtr build_scheme(const ExperimentConfig& config);

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::size_t> cap;
};

/// Writes soundness.csv. 0 iff every subset is recovered.
int cmd_verify(const RunOptions& options, std::ostream& out, std::ostream& err);
/// Writes eval_summary.csv, eval_summary.txt and (optionally) eval_trials.csv.
/// 0 on completion whatever the rates; 1 if a hypothesis missed its sample.
int cmd_evaluate(const RunOptions& options, std::ostream& out, std::ostream& err);
/// Writes descend.txt. 1 when Z covers X or verification fails.
int cmd_descend(const RunOptions& options, std::ostream& out, std::ostream& err);
/// Writes trace.txt and reconstruction.txt. 1 if the round trip loses a point.
int cmd_compress(const RunOptions& options, std::ostream& out, std::ostream& err);

struct SearchOptions {
  SearchProblem problem;
  std::optional<std::filesystem::path> witness;
  std::uint64_t node_limit = 50'000'000;
};

/// SAT -> 0, UNSAT -> 1, out of guard -> 2, node limit -> 3.
int cmd_search(const SearchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace emx::harness
