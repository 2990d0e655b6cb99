#include "nig/solver.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "nig/combinatorics.hpp"
#include "nig/parallel.hpp"

namespace nig {

namespace {

// Lowest index whose value is not beaten by the maximum by more than the
// improvement tolerance: near-ties go to the lowest rank, independent of how
// the values were split between workers.
std::size_t select_near_max(const std::vector<double>& values) {
  const double best = *std::max_element(values.begin(), values.end());
  std::size_t k = 0;
  while (improves(best, values[k])) ++k;
  return k;
}

BestResponse exact_search(const UtilityModel& model, std::vector<SeedSet> strategies,
                          std::size_t player, std::size_t budget, const SolverOptions& options) {
  const std::size_t n = model.config().node_count();
  const std::uint64_t total = binomial(n, budget);
  if (total > options.enumeration_cap) {
    throw CapExceeded("exact best response needs C(" + std::to_string(n) + ", " +
                      std::to_string(budget) + ") = " + std::to_string(total) +
                      " evaluations, above the cap of " + std::to_string(options.enumeration_cap));
  }

  std::vector<double> values(total);
  parallel_chunks(total, options.workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    if (begin == end) return;
    auto local = strategies;
    SeedSet subset = unrank_combination(n, budget, begin);
    for (std::uint64_t rank = begin; rank < end; ++rank) {
      local[player] = subset;
      values[rank] = model.evaluate(local, player);
      next_combination(subset, n);
    }
  });

  const std::size_t rank = select_near_max(values);
  return {unrank_combination(n, budget, rank), values[rank], static_cast<std::size_t>(total)};
}

BestResponse greedy_search(const UtilityModel& model, std::vector<SeedSet> strategies,
                           std::size_t player, std::size_t budget, const SolverOptions& options) {
  const std::size_t n = model.config().node_count();
  SeedSet chosen;
  double value = 0.0;
  std::size_t evaluations = 0;

  for (std::size_t pick = 0; pick < budget; ++pick) {
    // Candidates are the nodes not chosen yet, in ascending id order.
    std::vector<NodeId> candidates;
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::binary_search(chosen.begin(), chosen.end(), static_cast<NodeId>(v))) {
        candidates.push_back(static_cast<NodeId>(v));
      }
    }
    std::vector<double> values(candidates.size());
    parallel_chunks(candidates.size(), options.workers,
                    [&](std::size_t begin, std::size_t end, std::size_t) {
                      auto local = strategies;
                      for (std::size_t k = begin; k < end; ++k) {
                        SeedSet trial = chosen;
                        trial.insert(std::upper_bound(trial.begin(), trial.end(), candidates[k]),
                                     candidates[k]);
                        local[player] = std::move(trial);
                        values[k] = model.evaluate(local, player);
                      }
                    });
    const std::size_t k = select_near_max(values);
    chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), candidates[k]), candidates[k]);
    value = values[k];
    evaluations += candidates.size();
  }
  return {std::move(chosen), value, evaluations};
}

std::vector<SeedSet> strategies_of(const StrategyProfile& s) {
  return {s.strategies().begin(), s.strategies().end()};
}

void check_player(const UtilityModel& model, std::size_t player, const StrategyProfile& others) {
  const auto& cfg = model.config();
  if (player >= cfg.player_count()) throw std::out_of_range("player index out of range");
  check_profile(cfg, others.with(player, {}), /*allow_empty=*/true);
}

}  // namespace

BestResponse exact_best_response(const UtilityModel& model, std::size_t player,
                                 const StrategyProfile& others, const SolverOptions& options) {
  check_player(model, player, others);
  return exact_search(model, strategies_of(others), player, model.config().budgets[player], options);
}

BestResponse greedy_best_response(const UtilityModel& model, std::size_t player,
                                  const StrategyProfile& others, const SolverOptions& options) {
  check_player(model, player, others);
  return greedy_search(model, strategies_of(others), player, model.config().budgets[player],
                       options);
}

BestResponse exact_best_response(const GameConfig& cfg, std::size_t player,
                                 const StrategyProfile& others, const SolverOptions& options) {
  return exact_best_response(UtilityModel(cfg, Regime::horizon), player, others, options);
}

BestResponse greedy_best_response(const GameConfig& cfg, std::size_t player,
                                  const StrategyProfile& others, const SolverOptions& options) {
  return greedy_best_response(UtilityModel(cfg, Regime::horizon), player, others, options);
}

const char* to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::equilibrium:
      return "equilibrium";
    case OutcomeKind::cycle_detected:
      return "cycle_detected";
    case OutcomeKind::max_rounds_exhausted:
      return "max_rounds_exhausted";
  }
  return "unknown";
}

NashOutcome best_response_dynamics(const UtilityModel& model, const StrategyProfile& initial,
                                   const DynamicsOptions& options) {
  const auto& cfg = model.config();
  check_profile(cfg, initial);
  const std::size_t m = cfg.player_count();

  NashOutcome outcome;
  outcome.profile = initial;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::optional<std::mt19937_64> rng;
  if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

  std::set<std::pair<StrategyProfile, std::size_t>> visited;
  std::size_t quiet = 0;
  const std::size_t max_turns = options.max_rounds * m;

  auto respond = [&](std::size_t player, bool exact) {
    return exact ? exact_best_response(model, player, outcome.profile, options.solver)
                 : greedy_best_response(model, player, outcome.profile, options.solver);
  };
  auto try_move = [&](std::size_t player, const BestResponse& br) {
    const double current = model.evaluate(outcome.profile.strategies(), player);
    if (!improves(br.payoff, current)) return false;
    outcome.trace.push_back({player, outcome.profile.seeds(player), br.strategy, br.payoff - current});
    outcome.profile = outcome.profile.with(player, br.strategy);
    return true;
  };

  for (std::size_t turn = 0; turn < max_turns; ++turn) {
    const std::size_t slot = turn % m;
    if (slot == 0 && rng) {
      for (std::size_t k = m - 1; k > 0; --k) std::swap(order[k], order[(*rng)() % (k + 1)]);
    }
    const std::size_t player = order[slot];

    // Fixed order: the state is (profile, next player). Shuffled order: only
    // profiles at round starts are comparable.
    if (!rng || slot == 0) {
      if (!visited.emplace(outcome.profile, rng ? 0 : player).second) {
        outcome.kind = OutcomeKind::cycle_detected;
        outcome.turns = turn;
        return outcome;
      }
    }

    quiet = try_move(player, respond(player, options.use_exact)) ? 0 : quiet + 1;
    if (quiet < m) continue;

    outcome.turns = turn + 1;
    outcome.kind = OutcomeKind::equilibrium;
    outcome.certified = true;
    if (options.use_exact) return outcome;

    // Greedy-stable; confirm with exact responses where affordable.
    bool moved = false;
    try {
      for (std::size_t i = 0; i < m && !moved; ++i) moved = try_move(i, respond(i, true));
    } catch (const CapExceeded&) {
      outcome.certified = false;
      return outcome;
    }
    if (!moved) return outcome;
    outcome.certified = false;
    quiet = 0;
  }
  outcome.kind = OutcomeKind::max_rounds_exhausted;
  outcome.turns = max_turns;
  return outcome;
}

NashSearch exhaustive_nash_check(const UtilityModel& model, const ExhaustiveOptions& options) {
  const auto& cfg = model.config();
  const std::size_t n = cfg.node_count();
  const std::size_t m = cfg.player_count();

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total = saturating_multiply(total, binomial(n, cfg.budgets[i]));
  if (total > options.profile_cap) {
    throw CapExceeded("exhaustive search covers " + std::to_string(total) +
                      " profiles, above the cap of " + std::to_string(options.profile_cap));
  }

  std::vector<std::vector<SeedSet>> choices(m);
  for (std::size_t i = 0; i < m; ++i) choices[i] = all_combinations(n, cfg.budgets[i]);

  // Profile index: mixed radix with player 0 as the fastest digit.
  std::vector<std::uint64_t> stride(m, 1);
  for (std::size_t i = 1; i < m; ++i) stride[i] = stride[i - 1] * choices[i - 1].size();

  std::vector<char> stable(total, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t own = choices[i].size();
    const std::uint64_t opponents = total / own;
    parallel_chunks(opponents, options.workers, [&](std::size_t begin, std::size_t end, std::size_t) {
      std::vector<SeedSet> strategies(m);
      std::vector<double> values(own);
      for (std::uint64_t o = begin; o < end; ++o) {
        std::uint64_t rest = o, base = 0;
        for (std::size_t j = 0; j < m; ++j) {
          if (j == i) continue;
          const std::uint64_t digit = rest % choices[j].size();
          rest /= choices[j].size();
          strategies[j] = choices[j][digit];
          base += digit * stride[j];
        }
        double best = 0.0;
        for (std::uint64_t c = 0; c < own; ++c) {
          strategies[i] = choices[i][c];
          values[c] = model.evaluate(strategies, i);
          best = c == 0 ? values[c] : std::max(best, values[c]);
        }
        for (std::uint64_t c = 0; c < own; ++c) {
          if (improves(best, values[c])) stable[base + c * stride[i]] = 0;
        }
      }
    });
  }

  NashSearch result;
  result.profiles = total;
  result.evaluations = total * m;
  for (std::size_t i = 0; i < m; ++i) result.deviations += total * choices[i].size();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (!stable[idx]) continue;
    std::vector<SeedSet> strategies(m);
    for (std::size_t j = 0; j < m; ++j) strategies[j] = choices[j][(idx / stride[j]) % choices[j].size()];
    result.equilibria.emplace_back(std::move(strategies));
  }
  return result;
}

bool is_equilibrium(const UtilityModel& model, const StrategyProfile& s, const SolverOptions& options) {
  check_profile(model.config(), s);
  for (std::size_t i = 0; i < s.player_count(); ++i) {
    const auto br = exact_best_response(model, i, s, options);
    if (improves(br.payoff, model.evaluate(s.strategies(), i))) return false;
  }
  return true;
}

ConsensusEquilibrium consensus_equilibrium(const UtilityModel& model, const SolverOptions& options) {
  if (model.regime() != Regime::consensus) {
    throw std::invalid_argument("consensus_equilibrium needs a consensus-regime model");
  }
  const auto& cfg = model.config();
  const std::size_t n = cfg.node_count();
  const std::size_t m = cfg.player_count();

  ConsensusEquilibrium result;
  result.node_order.resize(n);
  std::iota(result.node_order.begin(), result.node_order.end(), 0);
  std::stable_sort(result.node_order.begin(), result.node_order.end(), [&](NodeId a, NodeId b) {
    return model.shares().at(a, 0) > model.shares().at(b, 0);
  });

  std::vector<std::size_t> players(m);
  std::iota(players.begin(), players.end(), 0);
  std::stable_sort(players.begin(), players.end(),
                   [&](std::size_t a, std::size_t b) { return cfg.budgets[a] > cfg.budgets[b]; });

  // built[k] is the strategy of players[k]; player k responds in the k+1
  // player sub-game formed by those placed before it.
  std::vector<SeedSet> built;
  const std::size_t first_budget = cfg.budgets[players[0]];
  built.push_back(make_seed_set(
      {result.node_order.begin(), result.node_order.begin() + static_cast<std::ptrdiff_t>(first_budget)}));
  for (std::size_t k = 1; k < m; ++k) {
    built.emplace_back();
    built[k] = exact_search(model, built, k, cfg.budgets[players[k]], options).strategy;
  }

  std::vector<SeedSet> strategies(m);
  for (std::size_t k = 0; k < m; ++k) strategies[players[k]] = built[k];
  result.profile = StrategyProfile(std::move(strategies));

  try {
    result.verified = is_equilibrium(model, result.profile, options);
  } catch (const CapExceeded&) {
    result.verified = false;
    return result;
  }
  if (!result.verified) {
    std::string seeds;
    for (std::size_t i = 0; i < m; ++i) {
      seeds += " s" + std::to_string(i) + "={";
      for (NodeId v : result.profile.seeds(i)) seeds += " " + std::to_string(v);
      seeds += " }";
    }
    throw VerificationError("consensus construction is not an equilibrium:" + seeds);
  }
  return result;
}

ConsensusEquilibrium consensus_equilibrium(const GameConfig& cfg, const SolverOptions& options) {
  return consensus_equilibrium(UtilityModel(cfg, Regime::consensus), options);
}

}  // namespace nig
