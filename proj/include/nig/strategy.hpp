#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "nig/graph.hpp"

namespace nig {

/// A player's seed nodes: strictly increasing node ids.
using SeedSet = std::vector<NodeId>;

/// Sorts `nodes` and rejects repeated ids.
SeedSet make_seed_set(std::vector<NodeId> nodes);

/*
  Seed sets s = (s_0, ..., s_{m-1}), one per player, each kept sorted so that
  equal profiles compare and hash equal. Budgets and node ranges are checked
  by the game layer, which knows the graph and b.
*/
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<SeedSet> strategies);

  std::size_t player_count() const noexcept { return strategies_.size(); }
  const SeedSet& seeds(std::size_t player) const { return strategies_.at(player); }
  std::span<const SeedSet> strategies() const noexcept { return strategies_; }

  /// Copy with player `player` switched to `seeds`.
  StrategyProfile with(std::size_t player, SeedSet seeds) const;

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
  friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  std::vector<SeedSet> strategies_;
};

/// Reads `player <i> seeds <id> ...` lines (0-based ids, `#` comments).
/// Players may appear in any order but at most once.
std::map<std::size_t, SeedSet> read_profile_entries(std::istream& in);

/// Requires players 0..player_count-1 to be present in `entries`, except
/// `skip` which, if given, is filled with an empty set.
StrategyProfile profile_from_entries(const std::map<std::size_t, SeedSet>& entries,
                                     std::size_t player_count,
                                     std::size_t skip = static_cast<std::size_t>(-1));

void write_profile(std::ostream& out, const StrategyProfile& s);

}  // namespace nig
