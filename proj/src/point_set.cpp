#include "emx/point_set.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <numeric>

#include "emx/errors.hpp"

namespace emx {

PointSet::PointSet(std::initializer_list<std::uint64_t> ids) {
  ids_.reserve(ids.size());
  for (auto id : ids) ids_.push_back(make_point(id));
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

PointSet PointSet::from(std::vector<PointId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return PointSet(std::move(ids));
}

PointSet PointSet::from_indices(std::span<const std::uint64_t> ids) {
  std::vector<PointId> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(make_point(id));
  return from(std::move(out));
}

PointSet PointSet::range(std::uint64_t first, std::uint64_t last) {
  std::vector<PointId> out;
  if (last >= first) {
    out.reserve(last - first + 1);
    for (std::uint64_t i = first;; ++i) {
      out.push_back(make_point(i));
      if (i == last) break;
    }
  }
  return PointSet(std::move(out));
}

bool PointSet::contains(PointId p) const { return std::binary_search(ids_.begin(), ids_.end(), p); }

bool PointSet::includes(const PointSet& other) const {
  return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end());
}

PointSet PointSet::with(PointId p) const {
  PointSet out = *this;
  out.insert(p);
  return out;
}

PointSet PointSet::without(PointId p) const {
  PointSet out = *this;
  auto it = std::lower_bound(out.ids_.begin(), out.ids_.end(), p);
  if (it != out.ids_.end() && *it == p) out.ids_.erase(it);
  return out;
}

PointSet PointSet::united(const PointSet& other) const {
  std::vector<PointId> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  return PointSet(std::move(out));
}

PointSet PointSet::minus(const PointSet& other) const {
  std::vector<PointId> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  return PointSet(std::move(out));
}

void PointSet::insert(PointId p) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), p);
  if (it == ids_.end() || *it != p) ids_.insert(it, p);
}

void PointSet::merge(const PointSet& other) {
  if (other.ids_.empty()) return;
  if (ids_.empty()) {
    ids_ = other.ids_;
    return;
  }
  *this = united(other);
}

std::string PointSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(to_index(ids_[i]));
  }
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw ResourceLimitError("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

void for_each_subset(const PointSet& pool, std::size_t k, const std::function<void(const PointSet&)>& visit) {
  const std::size_t n = pool.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<PointId> buf(k);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) buf[i] = pool[idx[i]];
    visit(PointSet::from(buf));
    // advance to the next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<PointSet> all_subsets(const PointSet& pool, std::size_t k) {
  std::vector<PointSet> out;
  out.reserve(binomial(pool.size(), k));
  for_each_subset(pool, k, [&](const PointSet& s) { out.push_back(s); });
  return out;
}

std::vector<PointSet> random_subsets(const PointSet& pool, std::size_t k, std::size_t count, std::uint64_t seed) {
  if (k > pool.size()) {
    throw PreconditionError("cannot draw " + std::to_string(k) + "-subsets from " + std::to_string(pool.size()) +
                            " points");
  }
  Rng rng(seed);
  std::vector<PointId> scratch(pool.begin(), pool.end());
  std::vector<PointSet> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    // partial Fisher-Yates over the first k slots
    for (std::size_t i = 0; i < k; ++i) {
      auto j = i + static_cast<std::size_t>(uniform_below(rng, scratch.size() - i));
      std::swap(scratch[i], scratch[j]);
    }
    out.push_back(PointSet::from(std::vector<PointId>(scratch.begin(), scratch.begin() + static_cast<long>(k))));
  }
  return out;
}

std::size_t PointSetHash::operator()(const PointSet& s) const noexcept {
  std::uint64_t h = 0x84222325CBF29CE4ULL ^ s.size();
  for (auto p : s) h = splitmix64(h ^ to_index(p));
  return static_cast<std::size_t>(h);
}

}  // namespace emx
