#pragma once

// Exact minimum hitting set by increasing-size exhaustive search.

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <vector>

#include "qbfscc/errors.hpp"

namespace qbfscc {

inline constexpr std::uint64_t kDefaultHittingBudget = 50'000'000;

/// Smallest set of elements from [0, universe) meeting every set in `sets`;
/// among the smallest, the lexicographically first one (sorted ascending).
/// Throws DomainError if some set is empty, CapError past `budget` nodes.
inline std::vector<std::size_t> min_hitting_set(std::size_t universe,
                                                const std::vector<boost::dynamic_bitset<>>& sets,
                                                std::uint64_t budget = kDefaultHittingBudget) {
  const std::size_t nsets = sets.size();
  for (const auto& s : sets)
    if (s.none()) throw DomainError("hitting set instance contains an empty set");

  // hits[e] = which sets contain element e
  std::vector<boost::dynamic_bitset<>> hits(universe, boost::dynamic_bitset<>(nsets));
  for (std::size_t i = 0; i < nsets; ++i)
    for (std::size_t e = sets[i].find_first(); e != boost::dynamic_bitset<>::npos; e = sets[i].find_next(e))
      hits[e].set(i);

  std::vector<std::size_t> forced;
  boost::dynamic_bitset<> covered(nsets);
  for (const auto& s : sets)
    if (s.count() == 1) {
      std::size_t e = s.find_first();
      if (std::find(forced.begin(), forced.end(), e) != forced.end()) continue;
      forced.push_back(e);
      covered |= hits[e];
    }
  std::sort(forced.begin(), forced.end());
  if (covered.all()) return forced;

  std::vector<std::size_t> useful;
  for (std::size_t e = 0; e < universe; ++e)
    if (hits[e].any() && std::find(forced.begin(), forced.end(), e) == forced.end()) useful.push_back(e);

  std::uint64_t nodes = 0;
  std::vector<std::size_t> chosen;
  // Depth-first over combinations in lexicographic order.
  auto search = [&](auto&& self, std::size_t start, std::size_t left, const boost::dynamic_bitset<>& cov) -> bool {
    if (++nodes > budget) throw CapError("hitting set search exceeded budget of " + std::to_string(budget) + " nodes");
    if (left == 0) return cov.all();
    std::size_t first_open = (~cov).find_first();
    for (std::size_t i = start; i + left <= useful.size(); ++i) {
      std::size_t e = useful[i];
      if (left == 1 && !hits[e].test(first_open)) continue;
      chosen.push_back(e);
      if (self(self, i + 1, left - 1, cov | hits[e])) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t k = 1; k <= useful.size(); ++k) {
    chosen.clear();
    if (search(search, 0, k, covered)) {
      std::vector<std::size_t> out = forced;
      out.insert(out.end(), chosen.begin(), chosen.end());
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  throw DomainError("no hitting set exists");
}

}  // namespace qbfscc
