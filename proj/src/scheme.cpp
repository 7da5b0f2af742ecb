#include "emx/scheme.hpp"

#include <algorithm>

#include "emx/errors.hpp"

namespace emx {

PointSet MonotoneScheme::compress(const PointSet& beta) const {
  if (beta.size() != arity_ + 1) {
    throw PreconditionError("sigma expects " + std::to_string(arity_ + 1) + " distinct points, got " +
                            std::to_string(beta.size()));
  }
  PointSet out = do_compress(beta);
  if (out.size() != arity_ || !beta.includes(out)) {
    throw ContractViolation(describe() + ": sigma({" + beta.to_string() + "}) = {" + out.to_string() +
                            "} is not a subset with one point removed");
  }
  return out;
}

PointId MonotoneScheme::ejected(const PointSet& beta) const { return beta.minus(compress(beta)).front(); }

PointSet MonotoneScheme::reconstruct(const PointSet& kernel) const {
  if (kernel.size() != arity_) {
    throw PreconditionError("eta expects " + std::to_string(arity_) + " distinct points, got " +
                            std::to_string(kernel.size()));
  }
  PointSet out = do_reconstruct(kernel);
  if (budget_ && out.size() > *budget_) {
    throw ContractViolation(describe() + ": eta({" + kernel.to_string() + "}) has " + std::to_string(out.size()) +
                            " points, budget is " + std::to_string(*budget_));
  }
  return out;
}

namespace {

class EnumerationScheme final : public MonotoneScheme {
 public:
  EnumerationScheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget)
      : MonotoneScheme(1, budget), tower_(std::move(tower)) {}

  std::string describe() const override { return "enumeration over " + tower_->describe(); }

 protected:
  PointSet do_compress(const PointSet& beta) const override {
    const ContextChain root;
    return tower_->key(0, root, beta[0]) > tower_->key(0, root, beta[1]) ? PointSet::from({beta[0]})
                                                                           : PointSet::from({beta[1]});
  }

  PointSet do_reconstruct(const PointSet& kernel) const override {
    const ContextChain root;
    return tower_->enumerate_below(root, tower_->key(0, root, kernel[0]));
  }

 private:
  std::shared_ptr<const OrderTower> tower_;
};

class TowerScheme final : public MonotoneScheme {
 public:
  TowerScheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget)
      : MonotoneScheme(tower->depth() + 1, budget), tower_(std::move(tower)) {}

  std::string describe() const override { return "tower over " + tower_->describe(); }

 protected:
  PointSet do_compress(const PointSet& beta) const override {
    auto [context, remaining] = peel(beta);
    // two points left; the larger level-0 key survives
    const PointId a = remaining[0];
    const PointId b = remaining[1];
    const PointId dropped = tower_->key(0, context, a) < tower_->key(0, context, b) ? a : b;
    return beta.without(dropped);
  }

  PointSet do_reconstruct(const PointSet& kernel) const override {
    auto [context, remaining] = peel(kernel);
    const PointId survivor = remaining[0];
    return kernel.united(tower_->enumerate_below(context, tower_->key(0, context, survivor)));
  }

 private:
  struct Peeled {
    ContextChain context;
    std::vector<PointId> remaining;
  };

  // Extract the maximum at levels depth..1, extending the context each time.
  Peeled peel(const PointSet& points) const {
    Peeled out{ContextChain{}, std::vector<PointId>(points.begin(), points.end())};
    for (std::size_t level = tower_->depth(); level >= 1; --level) {
      auto best = out.remaining.begin();
      Key best_key = tower_->key(level, out.context, *best);
      for (auto it = std::next(best); it != out.remaining.end(); ++it) {
        Key k = tower_->key(level, out.context, *it);
        if (k > best_key) {
          best = it;
          best_key = k;
        }
      }
      out.context.chain.push_back(*best);
      out.remaining.erase(best);
    }
    return out;
  }

  std::shared_ptr<const OrderTower> tower_;
};

class IdentityScheme final : public MonotoneScheme {
 public:
  explicit IdentityScheme(std::size_t arity) : MonotoneScheme(arity, std::nullopt) {}
  std::string describe() const override { return "identity(m=" + std::to_string(arity()) + ")"; }

 protected:
  PointSet do_compress(const PointSet& beta) const override { return beta.without(beta.back()); }
  PointSet do_reconstruct(const PointSet& kernel) const override { return kernel; }
};

}  // namespace

SchemePtr enumeration_scheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget) {
  if (!tower || tower->depth() != 0) throw PreconditionError("the enumeration scheme needs a depth-0 tower");
  return std::make_shared<const EnumerationScheme>(std::move(tower), budget);
}

SchemePtr tower_scheme(std::shared_ptr<const OrderTower> tower, std::optional<std::size_t> budget) {
  if (!tower) throw PreconditionError("tower scheme needs a tower");
  return std::make_shared<const TowerScheme>(std::move(tower), budget);
}

SchemePtr identity_scheme(std::size_t arity) { return std::make_shared<const IdentityScheme>(arity); }

TableScheme::TableScheme(std::size_t arity, std::optional<std::size_t> budget, std::map<PointSet, PointSet> sigma,
                         std::map<PointSet, PointSet> eta)
    : MonotoneScheme(arity, budget), sigma_(std::move(sigma)), eta_(std::move(eta)) {}

std::string TableScheme::describe() const {
  return "table(m=" + std::to_string(arity()) + ", " + std::to_string(sigma_.size()) + " sigma entries)";
}

PointSet TableScheme::do_compress(const PointSet& beta) const {
  auto it = sigma_.find(beta);
  if (it == sigma_.end()) throw PreconditionError("no sigma entry for {" + beta.to_string() + "}");
  return it->second;
}

PointSet TableScheme::do_reconstruct(const PointSet& kernel) const {
  auto it = eta_.find(kernel);
  return it == eta_.end() ? kernel : it->second;
}

const char* to_string(SoundnessStatus status) {
  switch (status) {
    case SoundnessStatus::kOk:
      return "ok";
    case SoundnessStatus::kViolation:
      return "violation";
    case SoundnessStatus::kMalformed:
      return "malformed";
    case SoundnessStatus::kError:
      return "error";
  }
  return "?";
}

std::vector<PointSet> SoundnessReport::violations() const {
  std::vector<PointSet> out;
  for (const auto& r : records) {
    if (r.status == SoundnessStatus::kViolation) out.push_back(r.subset);
  }
  return out;
}

std::size_t SoundnessReport::count(SoundnessStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [status](const SoundnessRecord& r) { return r.status == status; }));
}

std::string SoundnessReport::to_csv() const {
  std::string out = "subset,status,detail\n";
  for (const auto& r : records) {
    out += r.subset.to_string();
    out += ',';
    out += to_string(r.status);
    out += ',';
    out += r.detail;
    out += '\n';
  }
  return out;
}

namespace {

SoundnessRecord check_subset(const MonotoneScheme& scheme, const PointSet& beta) {
  SoundnessRecord rec{beta, SoundnessStatus::kOk, {}};
  if (beta.size() != scheme.arity() + 1) {
    rec.status = SoundnessStatus::kMalformed;
    rec.detail = "expected " + std::to_string(scheme.arity() + 1) + " points";
    return rec;
  }
  try {
    const PointSet image = scheme.reconstruct(scheme.compress(beta));
    const PointSet missing = beta.minus(image);
    if (!missing.empty()) {
      rec.status = SoundnessStatus::kViolation;
      rec.detail = "missing " + missing.to_string();
    }
  } catch (const std::exception& e) {
    rec.status = SoundnessStatus::kError;
    rec.detail = e.what();
    std::replace(rec.detail.begin(), rec.detail.end(), ',', ';');
  }
  return rec;
}

}  // namespace

SoundnessReport verify_soundness(const MonotoneScheme& scheme, std::span<const PointSet> subsets) {
  SoundnessReport report;
  report.records.resize(subsets.size());
  const auto n = static_cast<std::ptrdiff_t>(subsets.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    report.records[static_cast<std::size_t>(i)] = check_subset(scheme, subsets[static_cast<std::size_t>(i)]);
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const SoundnessRecord& a, const SoundnessRecord& b) { return a.subset < b.subset; });
  for (const auto& r : report.records) {
    if (r.status == SoundnessStatus::kOk || r.status == SoundnessStatus::kViolation) ++report.checked;
  }
  return report;
}

}  // namespace emx
