#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nig/dynamics.hpp"
#include "nig/graph.hpp"
#include "nig/strategy.hpp"

namespace nig {

/// Relative margin a payoff must clear to count as a strict improvement.
inline constexpr double kImprovementTolerance = 1e-12;

/// candidate > incumbent by more than kImprovementTolerance (relative).
bool improves(double candidate, double incumbent) noexcept;

/*
  One network influence game: the graph, per-player seed budgets (the player
  count is budgets.size()), the mixing weight alpha, the horizon T and the
  unseeded opinion epsilon.
*/
struct GameConfig {
  Graph graph;
  std::vector<std::size_t> budgets;
  double alpha = kDefaultAlpha;
  std::size_t horizon = 1;
  double epsilon = kDefaultEpsilon;

  std::size_t player_count() const noexcept { return budgets.size(); }
  std::size_t node_count() const noexcept { return graph.node_count(); }

  /// Throws std::invalid_argument on: fewer than 2 players, a budget outside
  /// [1, n], alpha outside (0,1), horizon 0, epsilon outside (0, 1/(2m)), or a
  /// graph failing validate().
  void validate() const;
};

/// Checks ids, player count and |s_i| <= b_i. Empty seed sets are rejected
/// unless `allow_empty`.
void check_profile(const GameConfig& cfg, const StrategyProfile& s, bool allow_empty = false);

struct PayoffVector {
  std::vector<double> payoffs;

  std::size_t size() const noexcept { return payoffs.size(); }
  double operator[](std::size_t i) const { return payoffs[i]; }
  double sum() const noexcept;
};

/// pi_i = (1/n) sum_v x^v_i(T) / |x^v(T)|_1, by simulating T steps.
PayoffVector utility(const GameConfig& cfg, const StrategyProfile& s);

/// pi_i = x_i / sum_j x_j with x_i = sum_v c^v x^v_i(0), c the consensus
/// weights. No simulation.
PayoffVector consensus_utility(const GameConfig& cfg, const StrategyProfile& s);

/// pi_i = (1/n) sum_v f^i_v / f_v built from diffusion centralities.
PayoffVector utility_closed_form(const GameConfig& cfg, const StrategyProfile& s);

enum class Regime {
  horizon,    // opinions after cfg.horizon steps
  consensus,  // limiting consensus opinion
};

/*
  Payoff evaluator with the per-source influence shares precomputed.

  For a source node u and an observation target t, share(u, t) is the part of
  the target's final opinion inherited from u. In the horizon regime the
  targets are the n nodes and share(u, v) = c^u_v at time T. In the consensus
  regime every node holds the same final opinion, so there is one target
  with share(u) = c^u.

  With m_u(s) the number of players seeding u,
    f^i_t = sum_{u in s_i} share(u,t) / m_u(s) + eps * sum_{u unseeded} share(u,t)
  and pi_i = mean over targets of f^i_t / sum_j f^j_t.

  Evaluation works on any number of strategies, including empty ones, so the
  solvers can score partial seed sets and sub-games. Immutable after
  construction; safe to share between threads.
*/
class UtilityModel {
 public:
  UtilityModel(const GameConfig& cfg, Regime regime, const DiffusionOptions& options = {});

  const GameConfig& config() const noexcept { return cfg_; }
  Regime regime() const noexcept { return regime_; }
  const InfluenceTable& shares() const noexcept { return shares_; }

  /// Payoff of every listed strategy.
  std::vector<double> evaluate(std::span<const SeedSet> strategies) const;
  /// Payoff of one player only.
  double evaluate(std::span<const SeedSet> strategies, std::size_t player) const;

  PayoffVector payoffs(const StrategyProfile& s) const;

 private:
  void accumulate(std::span<const SeedSet> strategies, std::vector<double>& f) const;

  GameConfig cfg_;
  Regime regime_;
  InfluenceTable shares_;
  std::vector<double> share_totals_;  // sum over all sources, per target
};

/// pi_i(partial + {v}, s_-i) - pi_i(partial, s_-i) under the model's regime.
/// Player i's entry of `others` is ignored; `partial` may be empty.
double marginal_gain(const UtilityModel& model, std::size_t player, const SeedSet& partial,
                     NodeId v, const StrategyProfile& others);

/// Horizon-regime convenience overload; builds a fresh model.
double marginal_gain(const GameConfig& cfg, std::size_t player, const SeedSet& partial, NodeId v,
                     const StrategyProfile& others);

}  // namespace nig
