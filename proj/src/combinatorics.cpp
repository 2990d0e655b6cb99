#include "nig/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nig {

namespace {
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
__extension__ using Wide = unsigned __int128;
}

std::uint64_t saturating_multiply(std::uint64_t a, std::uint64_t b) noexcept {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // After this step result == C(n - k + i, i), so the division is exact.
    result = result * (n - k + i) / i;
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(result);
}

bool next_combination(std::span<NodeId> subset, std::size_t n) noexcept {
  const std::size_t k = subset.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (static_cast<std::size_t>(subset[i]) < n - k + i) {
      ++subset[i];
      for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<NodeId> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
  if (rank >= binomial(n, k)) throw std::out_of_range("combination rank out of range");
  std::vector<NodeId> subset;
  subset.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    // Skip whole blocks of subsets that start with a smaller element.
    for (;; ++next) {
      const std::uint64_t block = binomial(n - next - 1, k - slot - 1);
      if (rank < block) break;
      rank -= block;
    }
    subset.push_back(static_cast<NodeId>(next));
    ++next;
  }
  return subset;
}

std::vector<std::vector<NodeId>> all_combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<NodeId>> out;
  if (k > n) return out;
  std::vector<NodeId> current(k);
  std::iota(current.begin(), current.end(), 0);
  do {
    out.push_back(current);
  } while (next_combination(current, n));
  return out;
}

}  // namespace nig
