#pragma once

// Compression learners G = decompress ∘ compress and Monte Carlo estimation
// of Pr[E_P G(S) <= sup_h E_P(h) - epsilon].

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emx/core.hpp"
#include "emx/scheme.hpp"

namespace emx {

struct EmxLearner {
  SchemePtr scheme;
  std::size_t cap = 1'000'000;

  /// Kernel size: the scheme's arity.
  std::size_t d() const { return scheme->arity(); }
};

/// Deduplicates the sample, chain-compresses it to d points and decompresses
/// with M - d iterations. Samples with fewer than d distinct points are
/// returned as-is. ResourceLimitError propagates.
Hypothesis apply_learner(const EmxLearner& learner, const Sample& sample);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  Rational expectation;
  std::size_t hypothesis_size = 0;
  bool failed = false;
  bool error = false;
  /// Learner output did not contain the distinct sample points.
  bool containment_violation = false;
  std::string error_message;

  bool operator==(const TrialRecord&) const = default;
};

struct EvalOptions {
  double confidence = 0.99;
  bool keep_trials = false;
};

/// Failure means expectation <= 1 - epsilon (the supremum over finite
/// hypotheses is 1 for a finite support). Errored trials are counted apart
/// and excluded from failure_rate's denominator.
struct EvalReport {
  std::size_t m = 0;
  Rational epsilon;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  std::size_t containment_violations = 0;
  double failure_rate = 0.0;  // NaN when no trial completed
  double ci_halfwidth = 0.0;
  double confidence = 0.99;
  std::vector<TrialRecord> per_trial;  // filled when keep_trials

  std::size_t completed() const noexcept { return trials - errors; }
  bool operator==(const EvalReport&) const = default;
};

/// Trial t draws its sample with seed derive_seed(seed, t). Trials run
/// concurrently; the report equals reference::evaluate's bit for bit.
EvalReport evaluate(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                    const Rational& epsilon, std::size_t trials, std::uint64_t seed, const EvalOptions& options = {});

/// Two-sided normal quantile for a confidence level in (0,1), e.g. 0.99 -> 2.5758.
double normal_quantile(double confidence);

/// "m,epsilon,trials,completed,failures,errors,containment_violations,failure_rate,ci_halfwidth,confidence"
std::string eval_summary_header();
std::string eval_summary_row(const EvalReport& report);
/// "m,epsilon,trial,seed,expectation,gap,hypothesis_size,failed,error"
std::string eval_trials_header();
std::string eval_trial_rows(const EvalReport& report);

/// Locale-independent shortest round-trip formatting; "nan" for NaN.
std::string format_double(double value);

namespace reference {
EvalReport evaluate(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                    const Rational& epsilon, std::size_t trials, std::uint64_t seed, const EvalOptions& options = {});
}  // namespace reference

}  // namespace emx
