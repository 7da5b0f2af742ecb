#include <fstream>
#include <functional>
#include <ostream>

#include <omp.h>

#include "emx/chain.hpp"
#include "emx/errors.hpp"
#include "emx/evaluation.hpp"
#include "emx/harness.hpp"

namespace emx::harness {
namespace {

struct Run {
  ExperimentConfig config;
  std::filesystem::path out_dir;
  std::size_t cap = 0;
};

Run prepare(const RunOptions& options) {
  Run run;
  run.config = load_config(options.config);
  run.out_dir = options.out_dir ? *options.out_dir : std::filesystem::path(run.config.output_dir);
  run.cap = options.cap ? *options.cap : run.config.cap;
  if (options.workers) {
    if (*options.workers < 1) throw ConfigError("--workers must be at least 1");
    omp_set_num_threads(*options.workers);
  }
  if (options.seed) {
    if (run.config.evaluation) run.config.evaluation->seed = *options.seed;
    if (run.config.verify) run.config.verify->seed = *options.seed;
  }
  std::filesystem::create_directories(run.out_dir);
  return run;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

template <class T>
const T& section(const std::optional<T>& value, const char* name) {
  if (!value) throw ConfigError(std::string("config has no '") + name + "' section");
  return *value;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "output: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int cmd_verify(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Run run = prepare(options);
    const VerifySpec& spec = section(run.config.verify, "verify");
    const SchemePtr scheme = build_scheme(run.config);
    const std::size_t k = scheme->arity() + 1;
    std::vector<PointSet> subsets;
    if (spec.exhaustive) {
      const std::uint64_t total = binomial(spec.points.size(), k);
      if (total > run.cap) {
        throw ResourceLimitError(std::to_string(total) + " subsets exceed the cap of " + std::to_string(run.cap));
      }
      subsets = all_subsets(spec.points, k);
    } else {
      subsets = random_subsets(spec.points, k, spec.count, spec.seed);
    }
    const SoundnessReport report = verify_soundness(*scheme, subsets);
    write_file(run.out_dir / "soundness.csv", report.to_csv());
    const std::size_t violations = report.count(SoundnessStatus::kViolation);
    const std::size_t errors = report.count(SoundnessStatus::kError);
    out << scheme->describe() << ": checked " << report.checked << " subsets, " << violations << " violations, "
        << errors << " errors\n";
    std::size_t shown = 0;
    for (const auto& rec : report.records) {
      if (rec.status == SoundnessStatus::kOk) continue;
      if (++shown > 10) {
        out << "  ... see soundness.csv\n";
        break;
      }
      out << "  " << to_string(rec.status) << " {" << rec.subset.to_string() << "} " << rec.detail << "\n";
    }
    return report.sound() ? kExitOk : kExitFailure;
  });
}

int cmd_evaluate(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Run run = prepare(options);
    const EvaluationSpec& spec = section(run.config.evaluation, "evaluation");
    const FiniteSupportDistribution& dist = section(run.config.distribution, "distribution");
    const EmxLearner learner{build_scheme(run.config), run.cap};
    EvalOptions eval_options;
    eval_options.confidence = to_double(spec.confidence);
    eval_options.keep_trials = spec.per_trial;

    std::string csv = eval_summary_header() + "\n";
    std::string trials_csv = eval_trials_header() + "\n";
    std::string text = "# failure iff expectation <= 1 - epsilon; failure_rate over completed trials; Wald interval at "
                       "confidence " + format_rational(spec.confidence) + "\n";
    text += "# scheme " + learner.scheme->describe() + ", seed " + std::to_string(spec.seed) + "\n";
    std::size_t containment = 0;
    for (std::size_t m : spec.m_values) {
      for (const Rational& eps : spec.epsilons) {
        const EvalReport r = evaluate(learner, dist, m, eps, spec.trials, spec.seed, eval_options);
        csv += eval_summary_row(r) + "\n";
        if (spec.per_trial) trials_csv += eval_trial_rows(r);
        text += "m=" + std::to_string(m) + " epsilon=" + format_rational(eps) + ": " + std::to_string(r.failures) +
                "/" + std::to_string(r.completed()) + " failed, rate " + format_double(r.failure_rate) + " +- " +
                format_double(r.ci_halfwidth) + "\n";
        if (r.errors > 0) {
          const std::string warning = "warning: m=" + std::to_string(m) + " epsilon=" + format_rational(eps) + ": " +
                                      std::to_string(r.errors) + " trials errored and were excluded";
          err << warning << "\n";
          text += warning + "\n";
        }
        containment += r.containment_violations;
      }
    }
    write_file(run.out_dir / "eval_summary.csv", csv);
    write_file(run.out_dir / "eval_summary.txt", text);
    if (spec.per_trial) write_file(run.out_dir / "eval_trials.csv", trials_csv);
    out << text;
    if (containment > 0) {
      err << containment << " hypotheses did not contain their sample\n";
      return kExitFailure;
    }
    return kExitOk;
  });
}

int cmd_descend(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Run run = prepare(options);
    const DescendSpec& spec = section(run.config.descend, "descend");
    const SchemePtr scheme = build_scheme(run.config);
    try {
      const ReductionWitness w = descend(scheme, spec.x, spec.y, DescendOptions{spec.reading, spec.max_subsets});
      const std::string dump = format_witness(w);
      write_file(run.out_dir / "descend.txt", dump);
      out << "x = " << to_index(w.x) << ", |Z| = " << w.z_size << ", reduced scheme checked on "
          << w.verification.checked << " subsets\n";
      return w.verification.sound() ? kExitOk : kExitFailure;
    } catch (const DescentError& e) {
      err << "descent failed: " << e.what() << "\n";
      return kExitFailure;
    } catch (const VerificationError& e) {
      err << "reduced scheme unsound on {" << e.subset().to_string() << "}: " << e.what() << "\n";
      return kExitFailure;
    }
  });
}

int cmd_compress(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Run run = prepare(options);
    const PointSet& points = section(run.config.compress_points, "compress");
    const SchemePtr scheme = build_scheme(run.config);
    const std::size_t d = scheme->arity();
    const CompressionTrace trace = compress_chain(points, *scheme);
    const std::size_t iterations = points.size() - d;
    const PointSet image = decompress_chain(trace.kernel, *scheme, iterations, run.cap);
    const PointSet lost = points.minus(image);
    write_file(run.out_dir / "trace.txt", format_trace(trace));
    write_file(run.out_dir / "reconstruction.txt", "kernel " + trace.kernel.to_string() + "\niterations " +
                                                       std::to_string(iterations) + "\nimage " + image.to_string() +
                                                       "\nsize " + std::to_string(image.size()) + "\nlost " +
                                                       lost.to_string() + "\n");
    out << points.size() << " points -> kernel {" << trace.kernel.to_string() << "} -> " << image.size()
        << " points\n";
    if (!lost.empty()) {
      err << "round trip lost {" << lost.to_string() << "}\n";
      return kExitFailure;
    }
    return kExitOk;
  });
}

int cmd_search(const SearchOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(options.problem);
    SearchLimits limits;
    limits.node_limit = options.node_limit;
    const SearchResult r = search_schemes(options.problem, limits);
    out << to_string(r.verdict) << " n=" << options.problem.n << " m=" << options.problem.m
        << " budget=" << options.problem.budget << " nodes=" << r.nodes
        << (r.refuted_by_counting ? " (counting bound)" : "") << "\n";
    if (r.witness && options.witness) {
      write_file(*options.witness, "# " + std::string(to_string(r.verdict)) + " n=" +
                                       std::to_string(options.problem.n) + " m=" + std::to_string(options.problem.m) +
                                       " budget=" + std::to_string(options.problem.budget) + "\n" +
                                       format_scheme_tables(*r.witness));
    }
    switch (r.verdict) {
      case Verdict::kSat:
        return kExitOk;
      case Verdict::kUnsat:
        return kExitFailure;
      case Verdict::kUndecided:
        break;
    }
    err << "node limit reached\n";
    return kExitResource;
  });
}

}  // namespace emx::harness
