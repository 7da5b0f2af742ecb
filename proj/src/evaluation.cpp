#include "emx/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "emx/chain.hpp"
#include "emx/errors.hpp"
#include "emx/rng.hpp"
#include "evaluation_detail.hpp"

namespace emx {

Hypothesis apply_learner(const EmxLearner& learner, const Sample& sample) {
  const PointSet distinct = sample.distinct();
  const std::size_t d = learner.d();
  if (distinct.size() < d) return Hypothesis(distinct);
  const CompressionTrace trace = compress_chain(distinct, *learner.scheme);
  return Hypothesis(decompress_chain(trace.kernel, *learner.scheme, distinct.size() - d, learner.cap));
}

double normal_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw PreconditionError("confidence must lie in (0,1)");
  return boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - confidence) / 2.0);
}

namespace detail {

TrialRecord run_trial(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                      const Rational& threshold, std::uint64_t master_seed, std::uint64_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = derive_seed(master_seed, trial);
  const Sample sample = draw_sample(dist, m, rec.seed);
  try {
    const Hypothesis h = apply_learner(learner, sample);
    rec.hypothesis_size = h.size();
    rec.containment_violation = !h.members().includes(sample.distinct());
    rec.expectation = expectation(dist, h);
    rec.failed = rec.expectation <= threshold;
  } catch (const std::exception& e) {
    rec.error = true;
    rec.error_message = e.what();
  }
  return rec;
}

EvalReport summarize(std::vector<TrialRecord> records, std::size_t m, const Rational& epsilon, std::uint64_t seed,
                     const EvalOptions& options) {
  EvalReport report;
  report.m = m;
  report.epsilon = epsilon;
  report.trials = records.size();
  report.seed = seed;
  report.confidence = options.confidence;
  for (const auto& r : records) {
    if (r.error) {
      ++report.errors;
      continue;
    }
    report.failures += r.failed ? 1 : 0;
    report.containment_violations += r.containment_violation ? 1 : 0;
  }
  const std::size_t n = report.completed();
  if (n == 0) {
    report.failure_rate = std::numeric_limits<double>::quiet_NaN();
    report.ci_halfwidth = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double p = static_cast<double>(report.failures) / static_cast<double>(n);
    report.failure_rate = p;
    report.ci_halfwidth = normal_quantile(options.confidence) * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  }
  if (options.keep_trials) report.per_trial = std::move(records);
  return report;
}

}  // namespace detail

EvalReport evaluate(const EmxLearner& learner, const FiniteSupportDistribution& dist, std::size_t m,
                    const Rational& epsilon, std::size_t trials, std::uint64_t seed, const EvalOptions& options) {
  if (trials == 0) throw PreconditionError("evaluate needs at least one trial");
  const Rational threshold = Rational(1) - epsilon;
  std::vector<TrialRecord> records(trials);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    records[static_cast<std::size_t>(t)] =
        detail::run_trial(learner, dist, m, threshold, seed, static_cast<std::uint64_t>(t));
  }
  return detail::summarize(std::move(records), m, epsilon, seed, options);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string eval_summary_header() {
  return "m,epsilon,trials,completed,failures,errors,containment_violations,failure_rate,ci_halfwidth,confidence";
}

std::string eval_summary_row(const EvalReport& r) {
  return std::to_string(r.m) + "," + format_rational(r.epsilon) + "," + std::to_string(r.trials) + "," +
         std::to_string(r.completed()) + "," + std::to_string(r.failures) + "," + std::to_string(r.errors) + "," +
         std::to_string(r.containment_violations) + "," + format_double(r.failure_rate) + "," +
         format_double(r.ci_halfwidth) + "," + format_double(r.confidence);
}

std::string eval_trials_header() { return "m,epsilon,trial,seed,expectation,gap,hypothesis_size,failed,error"; }

std::string eval_trial_rows(const EvalReport& r) {
  std::string out;
  const std::string prefix = std::to_string(r.m) + "," + format_rational(r.epsilon) + ",";
  for (const auto& t : r.per_trial) {
    out += prefix + std::to_string(t.trial) + "," + std::to_string(t.seed) + ",";
    if (t.error) {
      out += ",,,," + std::string("1") + "\n";
      continue;
    }
    out += format_rational(t.expectation) + "," + format_rational(Rational(1) - t.expectation) + "," +
           std::to_string(t.hypothesis_size) + "," + (t.failed ? "1" : "0") + ",0\n";
  }
  return out;
}

}  // namespace emx
