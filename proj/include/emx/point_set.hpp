#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "emx/rng.hpp"

namespace emx {

/// Stable identity of a domain point: its index in the domain registry.
enum class PointId : std::uint64_t {};

constexpr std::uint64_t to_index(PointId p) noexcept { return static_cast<std::uint64_t>(p); }
constexpr PointId make_point(std::uint64_t index) noexcept { return PointId{index}; }

/// Finite set of points kept sorted and duplicate free. The ordering of
/// PointSets (lexicographic over sorted ids) is the canonical subset order
/// used wherever reports must be deterministic.
class PointSet {
 public:
  using const_iterator = std::vector<PointId>::const_iterator;

  PointSet() = default;
  PointSet(std::initializer_list<std::uint64_t> ids);
  /// Sorts and deduplicates.
  static PointSet from(std::vector<PointId> ids);
  static PointSet from_indices(std::span<const std::uint64_t> ids);
  /// {first, first+1, ..., last}; empty when last < first.
  static PointSet range(std::uint64_t first, std::uint64_t last);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const_iterator begin() const noexcept { return ids_.begin(); }
  const_iterator end() const noexcept { return ids_.end(); }
  PointId operator[](std::size_t i) const { return ids_[i]; }
  PointId front() const { return ids_.front(); }
  PointId back() const { return ids_.back(); }
  std::span<const PointId> ids() const noexcept { return ids_; }

  bool contains(PointId p) const;
  bool includes(const PointSet& other) const;

  PointSet with(PointId p) const;
  PointSet without(PointId p) const;
  PointSet united(const PointSet& other) const;
  PointSet minus(const PointSet& other) const;
  void insert(PointId p);
  void merge(const PointSet& other);

  /// Space separated ids, e.g. "2 4 9".
  std::string to_string() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;
  friend std::strong_ordering operator<=>(const PointSet& a, const PointSet& b) {
    return std::lexicographical_compare_three_way(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end());
  }

 private:
  explicit PointSet(std::vector<PointId> sorted_unique) : ids_(std::move(sorted_unique)) {}
  std::vector<PointId> ids_;
};

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Calls visit(subset) for every k-subset of pool in canonical order.
void for_each_subset(const PointSet& pool, std::size_t k, const std::function<void(const PointSet&)>& visit);

/// All k-subsets of pool in canonical order.
std::vector<PointSet> all_subsets(const PointSet& pool, std::size_t k);

/// `count` k-subsets of pool drawn uniformly (with replacement across draws)
/// from a generator seeded with `seed`.
std::vector<PointSet> random_subsets(const PointSet& pool, std::size_t k, std::size_t count, std::uint64_t seed);

struct PointSetHash {
  std::size_t operator()(const PointSet& s) const noexcept;
};

}  // namespace emx
