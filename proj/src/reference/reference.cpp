// Serial reference kernels. They follow the definitions literally and are
// kept for cross-checking the parallel versions in tests and benchmarks.

#include <algorithm>

#include "emx/chain.hpp"
#include "emx/errors.hpp"
#include "emx/evaluation.hpp"
#include "emx/scheme.hpp"
#include "../evaluation_detail.hpp"

namespace emx::reference {

SoundnessReport verify_soundness(const MonotoneScheme& scheme, std::span<const PointSet> subsets) {
  SoundnessReport report;
  for (const auto& beta : subsets) {
    SoundnessRecord rec{beta, SoundnessStatus::kOk, {}};
    if (beta.size() != scheme.arity() + 1) {
      rec.status = SoundnessStatus::kMalformed;
      rec.detail = "expected " + std::to_string(scheme.arity() + 1) + " points";
    } else {
      ++report.checked;
      try {
        const PointSet image = scheme.reconstruct(scheme.compress(beta));
        const PointSet missing = beta.minus(image);
        if (!missing.empty()) {
          rec.status = SoundnessStatus::kViolation;
          rec.detail = "missing " + missing.to_string();
        }
      } catch (const std::exception& e) {
        --report.checked;
        rec.status = SoundnessStatus::kError;
        rec.detail = e.what();
        std::replace(rec.detail.begin(), rec.detail.end(), ',', ';');
      }
    }
    report.records.push_back(std::move(rec));
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const SoundnessRecord& a, const SoundnessRecord& b) { return a.subset < b.subset; });
  return report;
}

PointSet decompress_chain(const PointSet& kernel, const MonotoneScheme& scheme, std::size_t iterations,
                          std::size_t cap) {
  const std::size_t d = scheme.arity();
  PointSet result = scheme.reconstruct(kernel);
  if (result.size() > cap) throw ResourceLimitError("decompression iteration 0: set size exceeds cap");
  for (std::size_t it = 1; it <= iterations; ++it) {
    if (binomial(result.size(), d) > cap) {
      throw ResourceLimitError("decompression iteration " + std::to_string(it) + ": too many d-subsets");
    }
    PointSet next = result;
    for_each_subset(result, d, [&](const PointSet& t) { next.merge(scheme.reconstruct(t)); });
    result = std::move(next);
    if (result.size() > cap) {
      throw ResourceLimitError("decompression iteration " + std::to_string(it) + ": set size exceeds cap");
    }
  }
  return result;
}

EvalReport evaluate(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                    const Rational& epsilon, std::size_t trials, std::uint64_t seed, const EvalOptions& options) {
  if (trials == 0) throw PreconditionError("evaluate needs at least one trial");
  const Rational threshold = Rational(1) - epsilon;
  std::vector<TrialRecord> records;
  records.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) records.push_back(detail::run_trial(learner, dist, m, threshold, seed, t));
  return detail::summarize(std::move(records), m, epsilon, seed, options);
}

}  // namespace emx::reference
