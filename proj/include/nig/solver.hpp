#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nig/game.hpp"

namespace nig {

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;
inline constexpr std::uint64_t kDefaultProfileCap = 10'000'000;
inline constexpr std::size_t kDefaultMaxRounds = 1000;

/// An exhaustive search would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed equilibrium failed its deviation check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t workers = 1;
};

struct BestResponse {
  SeedSet strategy;
  double payoff = 0.0;
  std::size_t evaluations = 0;
};

/*
  Exact best response of `player` against the other entries of `others`
  (the player's own entry is ignored). Enumerates every seed set of exactly
  b_i nodes, which suffices because payoffs are monotone in the seed set.
  Sets within kImprovementTolerance of the best payoff count as ties and go
  to the lexicographically smallest set. Throws CapExceeded when
  C(n, b_i) exceeds options.enumeration_cap.
*/
BestResponse exact_best_response(const UtilityModel& model, std::size_t player,
                                 const StrategyProfile& others, const SolverOptions& options = {});

/// Greedy: b_i rounds, each adding the node of largest marginal gain (lowest
/// id on near-ties, as for the exact search). Performs sum_{k<b_i} (n - k) evaluations.
BestResponse greedy_best_response(const UtilityModel& model, std::size_t player,
                                  const StrategyProfile& others, const SolverOptions& options = {});

BestResponse exact_best_response(const GameConfig& cfg, std::size_t player,
                                 const StrategyProfile& others, const SolverOptions& options = {});
BestResponse greedy_best_response(const GameConfig& cfg, std::size_t player,
                                  const StrategyProfile& others, const SolverOptions& options = {});

enum class OutcomeKind { equilibrium, cycle_detected, max_rounds_exhausted };

const char* to_string(OutcomeKind kind) noexcept;

struct Move {
  std::size_t player;
  SeedSet before;
  SeedSet after;
  double gain;
};

struct NashOutcome {
  OutcomeKind kind = OutcomeKind::max_rounds_exhausted;
  StrategyProfile profile;
  std::vector<Move> trace;
  std::size_t turns = 0;
  // Equilibria found with greedy responses are re-checked with exact ones;
  // false when that check was skipped because it exceeded the cap.
  bool certified = false;
};

struct DynamicsOptions {
  std::size_t max_rounds = kDefaultMaxRounds;
  bool use_exact = true;
  // Reshuffle the player order every round instead of ascending order.
  std::optional<std::uint64_t> shuffle_seed;
  SolverOptions solver;
};

/*
  Round-robin best-response dynamics. A player switches when its best
  response beats its current payoff by more than kImprovementTolerance.
  Stops with:
    equilibrium           m consecutive turns without a switch;
    cycle_detected        the (profile, next player) state repeats. With a
                          shuffled order: a profile repeats at a round start;
    max_rounds_exhausted  after max_rounds * m turns.
*/
NashOutcome best_response_dynamics(const UtilityModel& model, const StrategyProfile& initial,
                                   const DynamicsOptions& options = {});

struct ExhaustiveOptions {
  std::uint64_t profile_cap = kDefaultProfileCap;
  std::size_t workers = 1;
};

struct NashSearch {
  std::vector<StrategyProfile> equilibria;
  std::uint64_t profiles = 0;
  // Payoff evaluations performed; each (player, opponents) slice is scored once.
  std::uint64_t evaluations = 0;
  // (profile, unilateral deviation) pairs covered: profiles * sum_i C(n, b_i).
  std::uint64_t deviations = 0;
};

/// Every full-budget profile from which no player gains more than the
/// improvement tolerance by any full-budget deviation.
NashSearch exhaustive_nash_check(const UtilityModel& model, const ExhaustiveOptions& options = {});

/// Deviation check of one profile: every player's exact best response.
bool is_equilibrium(const UtilityModel& model, const StrategyProfile& s,
                    const SolverOptions& options = {});

struct ConsensusEquilibrium {
  StrategyProfile profile;
  bool verified = false;
  std::vector<NodeId> node_order;  // by descending consensus weight
};

/*
  Sequential construction at consensus: players sorted by descending budget
  (stable), the first takes the top-weight nodes, each later player takes an
  exact best response against the players placed before it. The result is
  then deviation-checked; VerificationError if it is not an equilibrium,
  verified = false if the check exceeded the cap.
*/
ConsensusEquilibrium consensus_equilibrium(const UtilityModel& consensus_model,
                                           const SolverOptions& options = {});
ConsensusEquilibrium consensus_equilibrium(const GameConfig& cfg, const SolverOptions& options = {});

}  // namespace nig
