#pragma once

// Exhaustive existence check for bounded (m+1) -> m selection schemes on
// {0..n-1}. Subsets are bitmasks; every sigma map is tried in turn. Only
// usable while (m+1)^C(n, m+1) stays small.

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

inline std::vector<std::uint32_t> masks_of_size(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == k) out.push_back(mask);
  }
  return out;
}

inline double sigma_map_count(int n, int m) {
  double count = 1;
  for (std::size_t i = 0; i < masks_of_size(n, m + 1).size(); ++i) count *= m + 1;
  return count;
}

inline bool brute_scheme_exists(int n, int m, int budget) {
  const std::vector<std::uint32_t> inputs = masks_of_size(n, m + 1);
  // members[i][j] = j-th point of input i
  std::vector<std::vector<std::uint32_t>> members;
  for (std::uint32_t mask : inputs) {
    std::vector<std::uint32_t> bits;
    for (int p = 0; p < n; ++p) {
      if (mask & (1u << p)) bits.push_back(1u << p);
    }
    members.push_back(bits);
  }
  std::vector<int> choice(inputs.size(), 0);
  while (true) {
    // eta(t) must hold t plus every point dropped onto t
    std::map<std::uint32_t, std::uint32_t> eta;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const std::uint32_t dropped = members[i][static_cast<std::size_t>(choice[i])];
      const std::uint32_t target = inputs[i] & ~dropped;
      eta[target] |= inputs[i];
    }
    bool ok = true;
    for (const auto& [t, image] : eta) {
      if (std::popcount(image | t) > budget) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == m + 1) choice[pos++] = 0;
    if (pos == choice.size()) return false;
  }
}

}  // namespace oracle
