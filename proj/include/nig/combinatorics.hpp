#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nig/graph.hpp"

namespace nig {

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// Saturating product.
std::uint64_t saturating_multiply(std::uint64_t a, std::uint64_t b) noexcept;

/// Advances a strictly increasing k-subset of {0..n-1} to its lexicographic
/// successor. Returns false (leaving `subset` unspecified) past the last one.
bool next_combination(std::span<NodeId> subset, std::size_t n) noexcept;

/// The k-subset of {0..n-1} at position `rank` in lexicographic order.
std::vector<NodeId> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank);

/// Every k-subset of {0..n-1} in lexicographic order.
std::vector<std::vector<NodeId>> all_combinations(std::size_t n, std::size_t k);

}  // namespace nig
