#pragma once

// Shared by the parallel evaluator and its serial reference.

#include "emx/evaluation.hpp"

namespace emx::detail {

TrialRecord run_trial(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                      const Rational& threshold, std::uint64_t master_seed, std::uint64_t trial);

/// Aggregates per-trial records (in trial order) into a report.
EvalReport summarize(std::vector<TrialRecord> records, std::size_t m, const Rational& epsilon, std::uint64_t seed,
                     const EvalOptions& options);

}  // namespace emx::detail
