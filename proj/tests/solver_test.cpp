#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nig/combinatorics.hpp"
#include "nig/solver.hpp"
#include "oracles.hpp"

using namespace nig;

namespace {

using Seeds = std::vector<SeedSet>;

GameConfig two_cycle_game(std::size_t horizon) {
  GameConfig cfg;
  cfg.graph = Graph::from_edges(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  cfg.budgets = {1, 1};
  cfg.horizon = horizon;
  return cfg;
}

GameConfig counterexample_game() {
  GameConfig cfg;
  cfg.graph = build_counterexample(2, 1);
  cfg.budgets = {1, 1};
  cfg.alpha = 0.5;
  cfg.horizon = 1;
  cfg.epsilon = 1e-6;
  return cfg;
}

GameConfig small_consensus_game(std::uint64_t seed, std::size_t n) {
  GameConfig cfg;
  cfg.graph = random_graph(n, 1 + seed % 3, seed);
  cfg.budgets = {2, 2};
  return cfg;
}

}  // namespace

TEST(ExactBestResponse, TwoCycleTieGoesToLowestNode) {
  const auto br = exact_best_response(two_cycle_game(1), 0, StrategyProfile(Seeds{{0}, {1}}));
  EXPECT_EQ(br.strategy, (SeedSet{0}));
  EXPECT_NEAR(br.payoff, 0.5, 1e-15);
  EXPECT_EQ(br.evaluations, 2u);
}

TEST(ExactBestResponse, EvaluationCountIsBinomial) {
  GameConfig cfg;
  cfg.graph = random_graph(9, 2, 3);
  cfg.budgets = {3, 1};
  const auto br = exact_best_response(cfg, 0, StrategyProfile(Seeds{{0}, {4}}));
  EXPECT_EQ(br.evaluations, binomial(9, 3));
  EXPECT_EQ(br.strategy.size(), 3u);
}

TEST(ExactBestResponse, MatchesSubsetOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::random_instance(rng, 10, 2, 3, 5, 3);
    const UtilityModel model(inst.cfg, Regime::horizon);
    const auto br = exact_best_response(model, 0, inst.profile);
    Seeds buf(inst.profile.strategies().begin(), inst.profile.strategies().end());
    const double best = oracle::best_over_subsets(inst.cfg.node_count(), inst.cfg.budgets[0], [&](const SeedSet& s) {
      auto trial_profile = inst.profile.with(0, s);
      return oracle::payoffs(inst.cfg, trial_profile)[0];
    });
    EXPECT_NEAR(br.payoff, best, 1e-10);
    buf[0] = br.strategy;
    EXPECT_NEAR(model.evaluate(buf, 0), br.payoff, 1e-15);
  }
}

TEST(ExactBestResponse, WorkerCountDoesNotMatter) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = oracle::random_instance(rng, 14, 2, 3, 4, 3);
    const UtilityModel model(inst.cfg, Regime::horizon);
    const auto one = exact_best_response(model, 1, inst.profile, {kDefaultEnumerationCap, 1});
    const auto four = exact_best_response(model, 1, inst.profile, {kDefaultEnumerationCap, 4});
    EXPECT_EQ(one.strategy, four.strategy);
    EXPECT_EQ(one.payoff, four.payoff);
  }
}

TEST(ExactBestResponse, CapExceeded) {
  GameConfig cfg;
  cfg.graph = random_graph(30, 2, 1);
  cfg.budgets = {10, 1};
  EXPECT_THROW(exact_best_response(cfg, 0, StrategyProfile(Seeds{{0}, {1}}), {1000, 1}), CapExceeded);
}

TEST(GreedyBestResponse, EqualsExactForSingleSeed) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = oracle::random_instance(rng, 15, 2, 3, 5, 1);
    const UtilityModel model(inst.cfg, Regime::horizon);
    const auto exact = exact_best_response(model, 0, inst.profile);
    const auto greedy = greedy_best_response(model, 0, inst.profile);
    EXPECT_EQ(greedy.strategy, exact.strategy);
    EXPECT_EQ(greedy.payoff, exact.payoff);
  }
}

TEST(GreedyBestResponse, EvaluationCount) {
  GameConfig cfg;
  cfg.graph = random_graph(10, 2, 2);
  cfg.budgets = {3, 1};
  const auto br = greedy_best_response(cfg, 0, StrategyProfile(Seeds{{0}, {5}}));
  EXPECT_EQ(br.evaluations, 10u + 9u + 8u);
  EXPECT_EQ(br.strategy.size(), 3u);
}

TEST(GreedyBestResponse, ApproximationRatioAndDiminishingGains) {
  std::mt19937_64 rng(11);
  const double bound = 1.0 - std::exp(-1.0);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = oracle::random_instance(rng, 12, 2, 2, 5, 3);
    const UtilityModel model(inst.cfg, Regime::horizon);
    const auto exact = exact_best_response(model, 0, inst.profile);
    const auto greedy = greedy_best_response(model, 0, inst.profile);
    EXPECT_GE(greedy.payoff / exact.payoff, bound);
    EXPECT_LE(greedy.payoff, exact.payoff + 1e-12);

    // Re-run greedy step by step and check the gains shrink.
    SeedSet partial;
    double previous = 1.0;
    for (std::size_t k = 0; k < inst.cfg.budgets[0]; ++k) {
      double best = -1.0;
      NodeId pick = -1;
      for (NodeId v = 0; v < static_cast<NodeId>(inst.cfg.node_count()); ++v) {
        if (std::find(partial.begin(), partial.end(), v) != partial.end()) continue;
        const double g = marginal_gain(model, 0, partial, v, inst.profile);
        if (g > best) {
          best = g;
          pick = v;
        }
      }
      EXPECT_LE(best, previous + 1e-12);
      previous = best;
      partial.push_back(pick);
      partial = make_seed_set(std::move(partial));
    }
  }
}

TEST(Dynamics, CounterexampleCycles) {
  const UtilityModel model(counterexample_game(), Regime::horizon);
  const auto outcome = best_response_dynamics(model, StrategyProfile(Seeds{{0}, {1}}));
  EXPECT_EQ(outcome.kind, OutcomeKind::cycle_detected);
  EXPECT_FALSE(outcome.trace.empty());
  for (const auto& move : outcome.trace) EXPECT_GT(move.gain, 0.0);
  EXPECT_STREQ(to_string(outcome.kind), "cycle_detected");
}

TEST(Dynamics, CounterexampleShuffledOrderNeverSettles) {
  const UtilityModel model(counterexample_game(), Regime::horizon);
  DynamicsOptions opts;
  opts.shuffle_seed = 42;
  const auto outcome = best_response_dynamics(model, StrategyProfile(Seeds{{0}, {1}}), opts);
  EXPECT_NE(outcome.kind, OutcomeKind::equilibrium);
}

TEST(Dynamics, StartingAtEquilibriumIsAFixedPoint) {
  const UtilityModel model(two_cycle_game(1), Regime::horizon);
  const StrategyProfile s(Seeds{{0}, {1}});
  const auto outcome = best_response_dynamics(model, s);
  EXPECT_EQ(outcome.kind, OutcomeKind::equilibrium);
  EXPECT_EQ(outcome.profile, s);
  EXPECT_TRUE(outcome.trace.empty());
  EXPECT_TRUE(outcome.certified);
  EXPECT_EQ(outcome.turns, 2u);
}

TEST(Dynamics, ConsensusGamesReachEquilibrium) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto cfg = small_consensus_game(seed, 8);
    const UtilityModel model(cfg, Regime::consensus);
    const auto outcome = best_response_dynamics(model, StrategyProfile(Seeds{{0, 1}, {2, 3}}));
    if (outcome.kind != OutcomeKind::equilibrium) continue;
    EXPECT_TRUE(is_equilibrium(model, outcome.profile));
  }
}

TEST(Dynamics, GreedyModeIsCertified) {
  const auto cfg = small_consensus_game(3, 9);
  const UtilityModel model(cfg, Regime::consensus);
  DynamicsOptions opts;
  opts.use_exact = false;
  const auto outcome = best_response_dynamics(model, StrategyProfile(Seeds{{0, 1}, {2, 3}}), opts);
  if (outcome.kind == OutcomeKind::equilibrium && outcome.certified) {
    EXPECT_TRUE(is_equilibrium(model, outcome.profile));
  }
}

TEST(Dynamics, RoundLimit) {
  const UtilityModel model(counterexample_game(), Regime::horizon);
  DynamicsOptions opts;
  opts.max_rounds = 1;
  const auto outcome = best_response_dynamics(model, StrategyProfile(Seeds{{0}, {1}}), opts);
  EXPECT_NE(outcome.kind, OutcomeKind::equilibrium);
  EXPECT_LE(outcome.turns, 2u);
}

TEST(Exhaustive, CounterexampleHasNoEquilibrium) {
  const UtilityModel model(counterexample_game(), Regime::horizon);
  const auto search = exhaustive_nash_check(model);
  EXPECT_TRUE(search.equilibria.empty());
  EXPECT_EQ(search.profiles, 225u);
  EXPECT_EQ(search.deviations, 6750u);
  const auto threaded = exhaustive_nash_check(model, {kDefaultProfileCap, 4});
  EXPECT_EQ(threaded.profiles, search.profiles);
  EXPECT_EQ(threaded.evaluations, search.evaluations);
  EXPECT_TRUE(threaded.equilibria.empty());
}

TEST(Exhaustive, TwoCycleEveryProfileIsStable) {
  for (std::size_t t : {1u, 200u}) {
    const UtilityModel model(two_cycle_game(t), Regime::horizon);
    const auto search = exhaustive_nash_check(model);
    EXPECT_EQ(search.profiles, 4u);
    EXPECT_EQ(search.equilibria.size(), 4u);
  }
}

TEST(Exhaustive, AgreesWithIsEquilibrium) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = oracle::random_instance(rng, 7, 2, 2, 3, 2);
    const UtilityModel model(inst.cfg, Regime::horizon);
    const auto search = exhaustive_nash_check(model, {kDefaultProfileCap, 3});
    for (const auto& s : search.equilibria) EXPECT_TRUE(is_equilibrium(model, s));
    const auto n = static_cast<NodeId>(inst.cfg.node_count());
    std::size_t stable = 0;
    for (const auto& a : all_combinations(static_cast<std::size_t>(n), inst.cfg.budgets[0])) {
      for (const auto& b : all_combinations(static_cast<std::size_t>(n), inst.cfg.budgets[1])) {
        stable += is_equilibrium(model, StrategyProfile(Seeds{a, b})) ? 1 : 0;
      }
    }
    EXPECT_EQ(stable, search.equilibria.size());
  }
}

TEST(Exhaustive, ProfileCap) {
  const UtilityModel model(counterexample_game(), Regime::horizon);
  EXPECT_THROW(exhaustive_nash_check(model, {100, 1}), CapExceeded);
}

TEST(ConsensusEquilibrium, VerifiedAndFoundByExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto cfg = small_consensus_game(seed, 6 + seed);
    const UtilityModel model(cfg, Regime::consensus);
    const auto built = consensus_equilibrium(model);
    EXPECT_TRUE(built.verified);
    const auto search = exhaustive_nash_check(model);
    ASSERT_FALSE(search.equilibria.empty());
    EXPECT_NE(std::find(search.equilibria.begin(), search.equilibria.end(), built.profile),
              search.equilibria.end());
    // The first player takes the two heaviest nodes.
    EXPECT_EQ(built.profile.seeds(0),
              make_seed_set({built.node_order[0], built.node_order[1]}));
  }
}

TEST(ConsensusEquilibrium, RequiresConsensusRegime) {
  const UtilityModel model(small_consensus_game(1, 6), Regime::horizon);
  EXPECT_THROW(consensus_equilibrium(model), std::invalid_argument);
}

TEST(ConsensusEquilibrium, UnequalBudgetsAndThreePlayers) {
  GameConfig cfg;
  cfg.graph = random_graph(7, 2, 99);
  cfg.budgets = {1, 3, 2};
  cfg.epsilon = 1e-6;
  const auto built = consensus_equilibrium(cfg);
  EXPECT_TRUE(built.verified);
  EXPECT_EQ(built.profile.seeds(1).size(), 3u);
  EXPECT_EQ(built.profile.seeds(1),
            make_seed_set({built.node_order[0], built.node_order[1], built.node_order[2]}));
}
