#include "emx/tower.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "emx/errors.hpp"
#include "emx/rng.hpp"

namespace emx {
namespace {

constexpr Key kInvalid = std::numeric_limits<Key>::max();

void check_level(std::size_t depth, std::size_t level, const ContextChain& c) {
  if (c.size() > depth || level != depth - c.size()) {
    throw PreconditionError("level " + std::to_string(level) + " does not match a context of length " +
                            std::to_string(c.size()) + " in a depth-" + std::to_string(depth) + " tower");
  }
}

class FiniteProxyTower final : public OrderTower {
 public:
  FiniteProxyTower(std::size_t size, std::size_t depth, std::uint64_t seed) : size_(size), depth_(depth), seed_(seed) {}

  std::size_t depth() const noexcept override { return depth_; }

  bool valid(const ContextChain& c, PointId p) const override {
    if (c.size() > depth_ || to_index(p) >= size_) return false;
    auto order = order_for(c);
    return order && order->keys[to_index(p)] != kInvalid;
  }

  Key key(std::size_t level, const ContextChain& c, PointId p) const override {
    check_level(depth_, level, c);
    auto order = order_for(c);
    if (!order) throw PreconditionError("context chain is not valid in this tower");
    if (to_index(p) >= size_ || order->keys[to_index(p)] == kInvalid) {
      throw PreconditionError("point " + std::to_string(to_index(p)) + " is not valid in the given context");
    }
    return order->keys[to_index(p)];
  }

  PointSet enumerate_below(const ContextChain& c, Key bound) const override {
    check_level(depth_, 0, c);
    auto order = order_for(c);
    if (!order) throw PreconditionError("context chain is not valid in this tower");
    const std::size_t n = std::min<std::uint64_t>(order->by_key.size(), bound == kInvalid ? bound : bound + 1);
    return PointSet::from(std::vector<PointId>(order->by_key.begin(), order->by_key.begin() + static_cast<long>(n)));
  }

  std::string describe() const override {
    return "finite-proxy(size=" + std::to_string(size_) + ", depth=" + std::to_string(depth_) +
           ", seed=" + std::to_string(seed_) + ")";
  }

 private:
  struct LevelOrder {
    std::vector<Key> keys;         // indexed by point id; kInvalid outside the valid set
    std::vector<PointId> by_key;   // inverse permutation
  };
  using OrderPtr = std::shared_ptr<const LevelOrder>;

  // Null when some chain element is not valid in its prefix context.
  OrderPtr order_for(const ContextChain& c) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(c.chain); it != cache_.end()) return it->second;
    }
    OrderPtr built = build(c);
    std::unique_lock lock(mutex_);
    if (cache_.size() >= kMaxCached) cache_.clear();
    cache_.emplace(c.chain, built);
    return built;
  }

  OrderPtr build(const ContextChain& c) const {
    std::vector<PointId> valid;
    if (c.size() == 0) {
      valid.reserve(size_);
      for (std::uint64_t i = 0; i < size_; ++i) valid.push_back(make_point(i));
    } else {
      ContextChain parent{std::vector<PointId>(c.chain.begin(), c.chain.end() - 1)};
      auto up = order_for(parent);
      const PointId top = c.chain.back();
      if (!up || to_index(top) >= size_ || up->keys[to_index(top)] == kInvalid) return nullptr;
      // the initial segment strictly below the extracted maximum
      valid.assign(up->by_key.begin(), up->by_key.begin() + static_cast<long>(up->keys[to_index(top)]));
      std::sort(valid.begin(), valid.end());
    }

    std::uint64_t h = derive_seed(seed_, depth_ - c.size());
    for (auto p : c.chain) h = splitmix64(h ^ to_index(p));
    Rng rng(h);
    for (std::size_t i = valid.size(); i > 1; --i) {
      std::swap(valid[i - 1], valid[uniform_below(rng, i)]);
    }

    auto order = std::make_shared<LevelOrder>();
    order->keys.assign(size_, kInvalid);
    for (std::size_t k = 0; k < valid.size(); ++k) order->keys[to_index(valid[k])] = k;
    order->by_key = std::move(valid);
    return order;
  }

  static constexpr std::size_t kMaxCached = 1 << 16;

  std::size_t size_;
  std::size_t depth_;
  std::uint64_t seed_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::vector<PointId>, OrderPtr> cache_;
};

class EnumeratedTower final : public OrderTower {
 public:
  EnumeratedTower(Domain domain, std::uint64_t max_enumeration)
      : domain_(std::move(domain)), max_enumeration_(max_enumeration) {}

  std::size_t depth() const noexcept override { return 0; }

  bool valid(const ContextChain& c, PointId p) const override { return c.size() == 0 && domain_.contains(p); }

  Key key(std::size_t level, const ContextChain& c, PointId p) const override {
    check_level(0, level, c);
    return domain_.index(p);
  }

  PointSet enumerate_below(const ContextChain& c, Key bound) const override {
    check_level(0, 0, c);
    if (domain_.is_finite()) bound = std::min<Key>(bound, domain_.size() - 1);
    if (bound >= max_enumeration_) {
      throw ResourceLimitError("enumerating " + std::to_string(bound) + "+1 points exceeds the limit of " +
                               std::to_string(max_enumeration_));
    }
    return PointSet::range(0, bound);
  }

  std::string describe() const override { return "enumerated(" + domain_.describe() + ")"; }

 private:
  Domain domain_;
  std::uint64_t max_enumeration_;
};

}  // namespace

std::shared_ptr<const OrderTower> finite_proxy_tower(const Domain& domain, std::size_t depth, std::uint64_t seed) {
  if (!domain.is_finite()) throw PreconditionError("finite proxy towers need a finite domain");
  if (domain.size() == 0) throw PreconditionError("finite proxy towers need a non-empty domain");
  return std::make_shared<const FiniteProxyTower>(domain.size(), depth, seed);
}

std::shared_ptr<const OrderTower> enumerated_tower(const Domain& domain, std::uint64_t max_enumeration) {
  if (domain.is_finite() && domain.size() == 0) throw PreconditionError("enumerated tower over an empty domain");
  return std::make_shared<const EnumeratedTower>(domain, max_enumeration);
}

}  // namespace emx
