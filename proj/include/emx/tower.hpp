#pragma once

// Nested well-orderings used by the tower compression scheme.
//
// A tower of depth k has levels k..0. The outermost level orders every point
// of the domain. Conditioning on a context chain (c_1, ..., c_j) of points
// already extracted drops to level k - j and restricts attention to the
// points lying strictly below each c_i in the ordering it was extracted
// from. Level 0 keys are naturals with finitely many points below any bound.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "emx/core.hpp"
#include "emx/point_set.hpp"

namespace emx {

using Key = std::uint64_t;

/// Maxima extracted so far, outermost level first. The level a chain
/// conditions is depth - chain.size().
struct ContextChain {
  std::vector<PointId> chain;

  std::size_t size() const noexcept { return chain.size(); }
  ContextChain extended(PointId p) const {
    ContextChain out = *this;
    out.chain.push_back(p);
    return out;
  }
};

class OrderTower {
 public:
  virtual ~OrderTower() = default;

  virtual std::size_t depth() const noexcept = 0;
  /// True when p may be ranked under context c.
  virtual bool valid(const ContextChain& c, PointId p) const = 0;
  /// Injective over the points valid in c. `level` must equal
  /// depth() - c.size(); throws PreconditionError otherwise or when p is not
  /// valid in c.
  virtual Key key(std::size_t level, const ContextChain& c, PointId p) const = 0;
  /// Exactly {x valid in c : key(0, c, x) <= bound}. Requires c.size() == depth().
  virtual PointSet enumerate_below(const ContextChain& c, Key bound) const = 0;
  virtual std::string describe() const = 0;
};

/// Desk-scale stand-in for a tower over a large cardinal: every context gets
/// a seeded pseudorandom permutation of its valid points, keyed 0..n-1.
/// Rejects empty domains.
std::shared_ptr<const OrderTower> finite_proxy_tower(const Domain& domain, std::size_t depth, std::uint64_t seed);

/// Depth-0 tower whose only key is the enumeration index. enumerate_below
/// throws ResourceLimitError when it would return more than max_enumeration
/// points.
std::shared_ptr<const OrderTower> enumerated_tower(const Domain& domain, std::uint64_t max_enumeration = 1'000'000);

}  // namespace emx
