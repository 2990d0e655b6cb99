#include "nig/strategy.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nig {

SeedSet make_seed_set(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("seed set lists a node more than once");
  }
  return nodes;
}

StrategyProfile::StrategyProfile(std::vector<SeedSet> strategies) {
  strategies_.reserve(strategies.size());
  for (auto& s : strategies) strategies_.push_back(make_seed_set(std::move(s)));
}

StrategyProfile StrategyProfile::with(std::size_t player, SeedSet seeds) const {
  StrategyProfile copy = *this;
  copy.strategies_.at(player) = make_seed_set(std::move(seeds));
  return copy;
}

namespace {

template <typename T>
bool parse_integer(const std::string& token, T& value) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace

std::map<std::size_t, SeedSet> read_profile_entries(std::istream& in) {
  std::map<std::size_t, SeedSet> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string keyword;
    if (!(tokens >> keyword) || keyword.front() == '#') continue;
    if (keyword != "player") throw ParseError(line_no, "expected 'player <i> seeds <id> ...'");

    std::string player_token, seeds_keyword;
    std::size_t player = 0;
    if (!(tokens >> player_token >> seeds_keyword) || !parse_integer(player_token, player) ||
        seeds_keyword != "seeds") {
      throw ParseError(line_no, "expected 'player <i> seeds <id> ...'");
    }
    std::vector<NodeId> nodes;
    for (std::string t; tokens >> t;) {
      NodeId v = 0;
      if (!parse_integer(t, v) || v < 0) throw ParseError(line_no, "bad node id '" + t + "'");
      nodes.push_back(v);
    }
    if (entries.contains(player)) {
      throw ParseError(line_no, "player " + std::to_string(player) + " listed twice");
    }
    try {
      entries.emplace(player, make_seed_set(std::move(nodes)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return entries;
}

StrategyProfile profile_from_entries(const std::map<std::size_t, SeedSet>& entries,
                                     std::size_t player_count, std::size_t skip) {
  std::vector<SeedSet> strategies(player_count);
  for (const auto& [player, seeds] : entries) {
    if (player >= player_count) {
      throw std::invalid_argument("player " + std::to_string(player) + " exceeds player count " +
                                  std::to_string(player_count));
    }
    if (player != skip) strategies[player] = seeds;
  }
  for (std::size_t i = 0; i < player_count; ++i) {
    if (i != skip && !entries.contains(i)) {
      throw std::invalid_argument("missing strategy for player " + std::to_string(i));
    }
  }
  return StrategyProfile(std::move(strategies));
}

void write_profile(std::ostream& out, const StrategyProfile& s) {
  for (std::size_t i = 0; i < s.player_count(); ++i) {
    out << "player " << i << " seeds";
    for (NodeId v : s.seeds(i)) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace nig
