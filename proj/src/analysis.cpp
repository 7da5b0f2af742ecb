#include "emx/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "emx/errors.hpp"

namespace emx {

const char* to_string(ZReading reading) { return reading == ZReading::kSuperset ? "superset" : "direct"; }

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSat:
      return "SAT";
    case Verdict::kUnsat:
      return "UNSAT";
    case Verdict::kUndecided:
      return "UNDECIDED";
  }
  return "?";
}

ReducedScheme::ReducedScheme(SchemePtr base, PointId x, PointSet y)
    : MonotoneScheme(base->arity() - 1, base->budget()), base_(std::move(base)), x_(x), y_(std::move(y)) {}

std::string ReducedScheme::describe() const {
  return "reduced(" + base_->describe() + ", x=" + std::to_string(to_index(x_)) + ")";
}

PointSet ReducedScheme::do_compress(const PointSet& s) const {
  if (!y_.includes(s)) throw PreconditionError("reduced sigma input {" + s.to_string() + "} is not inside Y");
  const PointSet kept = base_->compress(s.with(x_));
  if (!kept.contains(x_)) {
    throw ContractViolation("sigma({" + s.to_string() + "} + x) compressed x out, so x lies in Z");
  }
  return kept.without(x_);
}

PointSet ReducedScheme::do_reconstruct(const PointSet& t) const {
  if (!y_.includes(t)) throw PreconditionError("reduced eta input {" + t.to_string() + "} is not inside Y");
  return base_->reconstruct(t.with(x_)).without(x_);
}

ReductionWitness descend(SchemePtr scheme, const PointSet& x_domain, const PointSet& y, DescendOptions options) {
  if (!scheme) throw PreconditionError("descend needs a scheme");
  const std::size_t m = scheme->arity();
  if (m == 0) throw PreconditionError("a 1 -> 0 scheme cannot be reduced further");
  if (!x_domain.includes(y)) throw PreconditionError("Y must be a subset of X");
  if (y.size() < m) {
    throw PreconditionError("Y needs at least " + std::to_string(m) + " points for a " + std::to_string(m) + " -> " +
                            std::to_string(m - 1) + " reduction");
  }
  std::uint64_t work = 2 * binomial(y.size(), m);
  if (options.reading == ZReading::kSuperset) work += binomial(y.size(), m + 1);
  if (work > options.max_subsets) {
    throw GuardError("descend over |Y| = " + std::to_string(y.size()) + " needs " + std::to_string(work) +
                     " subset evaluations, limit is " + std::to_string(options.max_subsets));
  }

  PointSet z;
  for_each_subset(y, m, [&](const PointSet& t) { z.merge(scheme->reconstruct(t)); });
  if (options.reading == ZReading::kSuperset) {
    z.merge(y);
    for_each_subset(y, m + 1, [&](const PointSet& beta) { z.merge(scheme->reconstruct(scheme->compress(beta))); });
  }

  // x must also avoid Y itself so that s ∪ {x} has m+1 points
  const PointSet candidates = x_domain.minus(z).minus(y);
  if (candidates.empty()) {
    throw DescentError("Z covers X: |Z| = " + std::to_string(z.size()) + ", |X| = " + std::to_string(x_domain.size()),
                       z.size());
  }

  ReductionWitness w;
  w.x = candidates.front();
  w.z_size = z.size();
  w.z = std::move(z);
  w.reading = options.reading;
  w.reduced = std::make_shared<const ReducedScheme>(scheme, w.x, y);
  const auto inputs = all_subsets(y, m);
  w.verification = verify_soundness(*w.reduced, inputs);
  for (const auto& rec : w.verification.records) {
    if (rec.status != SoundnessStatus::kOk) {
      throw VerificationError("reduced scheme fails on {" + rec.subset.to_string() + "}: " + rec.detail, rec.subset);
    }
  }
  return w;
}

std::string format_witness(const ReductionWitness& w) {
  const auto& reduced = *w.reduced;
  const PointSet& y = reduced.sub_domain();
  std::string out;
  out += "x " + std::to_string(to_index(w.x)) + "\n";
  out += "z_reading " + std::string(to_string(w.reading)) + "\n";
  out += "z_size " + std::to_string(w.z_size) + "\n";
  out += "z " + w.z.to_string() + "\n";
  out += "sub_domain " + y.to_string() + "\n";
  out += "reduced_arity " + std::to_string(reduced.arity()) + "\n";
  for_each_subset(y, reduced.arity() + 1, [&](const PointSet& s) {
    out += "sigma " + s.to_string() + " | " + reduced.compress(s).to_string() + "\n";
  });
  for_each_subset(y, reduced.arity(), [&](const PointSet& t) {
    out += "eta " + t.to_string() + " | " + reduced.reconstruct(t).to_string() + "\n";
  });
  out += "verified " + std::to_string(w.verification.checked) + " violations " +
         std::to_string(w.verification.count(SoundnessStatus::kViolation)) + "\n";
  return out;
}

void validate(const SearchProblem& p) {
  if (p.n < 2 || p.n < p.m + 1 || p.budget < 1) {
    throw PreconditionError("search problem needs n >= 2, n >= m+1 and budget >= 1 (got n=" + std::to_string(p.n) +
                            ", m=" + std::to_string(p.m) + ", budget=" + std::to_string(p.budget) + ")");
  }
}

bool counting_refutes(const SearchProblem& p) {
  validate(p);
  const unsigned __int128 inputs = binomial(p.n, p.m + 1);
  const unsigned __int128 slots = p.budget > p.m ? p.budget - p.m : 0;
  return inputs > static_cast<unsigned __int128>(binomial(p.n, p.m)) * slots;
}

namespace {

struct Option {
  PointId dropped;
  std::size_t target;
};

class Backtracker {
 public:
  Backtracker(const SearchProblem& p, std::uint64_t node_limit) : node_limit_(node_limit) {
    const PointSet domain = PointSet::range(0, p.n - 1);
    targets_ = all_subsets(domain, p.m);
    std::map<PointSet, std::size_t> target_index;
    for (std::size_t i = 0; i < targets_.size(); ++i) target_index.emplace(targets_[i], i);
    inputs_ = all_subsets(domain, p.m + 1);
    options_.resize(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      for (auto q : inputs_[i]) options_[i].push_back({q, target_index.at(inputs_[i].without(q))});
    }
    // Points are interchangeable, so the first input may drop its largest point.
    if (!options_.empty()) options_[0] = {options_[0].back()};
    capacity_ = p.budget > p.m ? p.budget - p.m : 0;
    load_.assign(targets_.size(), 0);
    choice_.assign(inputs_.size(), 0);
  }

  // true: found; false: exhausted; nullopt: node limit reached
  std::optional<bool> run() {
    aborted_ = false;
    const bool found = assign(0);
    if (aborted_) return std::nullopt;
    return found;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

  std::shared_ptr<const TableScheme> witness(const SearchProblem& p) const {
    std::map<PointSet, PointSet> sigma;
    std::map<PointSet, PointSet> eta;
    for (const auto& t : targets_) eta.emplace(t, t);
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const Option& o = options_[i][choice_[i]];
      sigma.emplace(inputs_[i], targets_[o.target]);
      eta[targets_[o.target]].insert(o.dropped);
    }
    return std::make_shared<const TableScheme>(p.m, p.budget, std::move(sigma), std::move(eta));
  }

 private:
  bool assign(std::size_t i) {
    if (i == inputs_.size()) return true;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return false;
    }
    if (!all_remaining_placeable(i)) return false;
    std::vector<std::size_t> order(options_[i].size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return load_[options_[i][a].target] < load_[options_[i][b].target];
    });
    for (std::size_t k : order) {
      const std::size_t t = options_[i][k].target;
      if (load_[t] >= capacity_) continue;
      ++load_[t];
      choice_[i] = k;
      if (assign(i + 1)) return true;
      --load_[t];
      if (aborted_) return false;
    }
    return false;
  }

  bool all_remaining_placeable(std::size_t from) const {
    for (std::size_t j = from; j < inputs_.size(); ++j) {
      bool any = false;
      for (const auto& o : options_[j]) {
        if (load_[o.target] < capacity_) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  }

  std::vector<PointSet> targets_;
  std::vector<PointSet> inputs_;
  std::vector<std::vector<Option>> options_;
  std::vector<std::size_t> load_;
  std::vector<std::size_t> choice_;
  std::size_t capacity_ = 0;
  std::uint64_t node_limit_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

SearchResult search_schemes(const SearchProblem& problem, const SearchLimits& limits) {
  validate(problem);
  SearchResult result;
  if (limits.use_counting && counting_refutes(problem)) {
    result.verdict = Verdict::kUnsat;
    result.refuted_by_counting = true;
    return result;
  }
  if (problem.n > limits.exhaustive_max_n) {
    throw GuardError("n = " + std::to_string(problem.n) + " exceeds the exhaustive search limit of " +
                     std::to_string(limits.exhaustive_max_n) + " and the counting bound does not refute it");
  }

  Backtracker search(problem, limits.node_limit);
  const auto outcome = search.run();
  result.nodes = search.nodes();
  if (!outcome) {
    result.verdict = Verdict::kUndecided;
    return result;
  }
  if (!*outcome) {
    result.verdict = Verdict::kUnsat;
    return result;
  }

  auto witness = search.witness(problem);
  const auto inputs = all_subsets(PointSet::range(0, problem.n - 1), problem.m + 1);
  const SoundnessReport check = verify_soundness(*witness, inputs);
  if (!check.sound() || check.checked != inputs.size()) {
    throw std::logic_error("search produced a witness that fails soundness");
  }
  result.verdict = Verdict::kSat;
  result.witness = std::move(witness);
  return result;
}

std::string format_scheme_tables(const TableScheme& scheme) {
  std::string out;
  for (const auto& [beta, kept] : scheme.sigma_table()) out += "sigma " + beta.to_string() + " | " + kept.to_string() + "\n";
  for (const auto& [t, image] : scheme.eta_table()) out += "eta " + t.to_string() + " | " + image.to_string() + "\n";
  return out;
}

}  // namespace emx
