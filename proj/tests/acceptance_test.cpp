// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "nig/cli.hpp"
#include "nig/solver.hpp"
#include "oracles.hpp"

using namespace nig;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += " (over time budget)";
  }
  if (!v.pass) ++failures;
  std::printf("%s %d %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::vector<oracle::Instance> fuzz_corpus(std::size_t count) {
  std::mt19937_64 rng(20240601);
  std::vector<oracle::Instance> corpus;
  for (std::size_t k = 0; k < count; ++k) corpus.push_back(oracle::random_instance(rng, 30, 2, 3, 10, 4));
  return corpus;
}

Verdict constant_sum(const std::vector<oracle::Instance>& corpus) {
  double worst = 0.0;
  for (const auto& inst : corpus) worst = std::max(worst, std::abs(utility(inst.cfg, inst.profile).sum() - 1.0));
  return {worst <= 1e-9, std::to_string(corpus.size()) + " instances, max |sum - 1| = " + fmt("%.3g", worst)};
}

Verdict equivalence(const std::vector<oracle::Instance>& corpus) {
  double worst = 0.0;
  for (const auto& inst : corpus) {
    const auto sim = utility(inst.cfg, inst.profile);
    const auto closed = utility_closed_form(inst.cfg, inst.profile);
    for (std::size_t i = 0; i < sim.size(); ++i) worst = std::max(worst, std::abs(sim[i] - closed[i]));
  }
  return {worst <= 1e-10, std::to_string(corpus.size()) + " instances, max diff = " + fmt("%.3g", worst)};
}

Verdict consensus_limit() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  bool all_reached = true;
  for (int k = 0; k < 50; ++k) {
    const auto inst = oracle::random_instance(rng, 30, 2, 3, 1, 4);
    const auto gamma = influence_matrix(inst.cfg.graph, inst.cfg.alpha);
    const auto c = eigenvector_weights(gamma).weights;
    const auto x0 = initialize(inst.cfg.node_count(), inst.profile, inst.cfg.epsilon);
    const auto xt = evolve(x0, gamma, 10'000);
    all_reached = all_reached && consensus_reached(xt, 1e-8);
    for (std::size_t i = 0; i < x0.player_count(); ++i) {
      double predicted = 0.0;
      for (std::size_t v = 0; v < x0.node_count(); ++v) predicted += c[v] * x0.at(static_cast<NodeId>(v), i);
      for (std::size_t v = 0; v < xt.node_count(); ++v) {
        worst = std::max(worst, std::abs(xt.at(static_cast<NodeId>(v), i) - predicted));
      }
    }
  }
  return {worst <= 1e-8 && all_reached,
          "50 graphs, max deviation = " + fmt("%.3g", worst) + (all_reached ? ", consensus reached" : ", consensus missed")};
}

Verdict submodularity_fuzz() {
  std::mt19937_64 rng(4242);
  constexpr int kTrials = 10'000;
  constexpr int kPerModel = 50;
  double worst_mono = 0.0, worst_sub = 0.0;
  int mono = 0, sub = 0;
  for (int built = 0; mono < kTrials; ++built) {
    const auto inst = oracle::random_instance(rng, 20, 2, 3, 10, 3);
    const std::size_t n = inst.cfg.node_count();
    if (n < 4) continue;
    const UtilityModel model(inst.cfg, built % 5 == 0 ? Regime::consensus : Regime::horizon);
    std::vector<SeedSet> buf(inst.profile.strategies().begin(), inst.profile.strategies().end());
    const std::size_t player = built % inst.profile.player_count();
    auto value = [&](SeedSet s) {
      buf[player] = make_seed_set(std::move(s));
      return model.evaluate(buf, player);
    };
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int t = 0; t < kPerModel && mono < kTrials; ++t) {
      std::shuffle(order.begin(), order.end(), rng);
      const std::size_t ysize = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(n - 1, 5))(rng);
      const std::size_t xsize = std::uniform_int_distribution<std::size_t>(0, ysize)(rng);
      const NodeId v = order[ysize];
      SeedSet x(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(xsize));
      SeedSet y(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ysize));
      SeedSet xv = x, yv = y;
      xv.push_back(v);
      yv.push_back(v);
      const double gx = value(xv) - value(x);
      const double gy = value(yv) - value(y);
      worst_mono = std::max(worst_mono, -gx);
      worst_sub = std::max(worst_sub, gy - gx);
      ++mono;
      ++sub;
    }
  }
  const bool pass = worst_mono <= 1e-12 && worst_sub <= 1e-12;
  return {pass, std::to_string(mono) + " monotonicity / " + std::to_string(sub) +
                    " submodularity trials, worst violations " + fmt("%.3g", std::max(worst_mono, 0.0)) +
                    " / " + fmt("%.3g", std::max(worst_sub, 0.0))};
}

Verdict greedy_ratio() {
  std::mt19937_64 rng(1001);
  const double bound = 1.0 - std::exp(-1.0);
  double min_ratio = 1.0;
  for (int k = 0; k < 100; ++k) {
    auto inst = oracle::random_instance(rng, 16, 2, 2, 10, 3);
    const UtilityModel model(inst.cfg, Regime::horizon);
    for (std::size_t player = 0; player < 2; ++player) {
      const auto exact = exact_best_response(model, player, inst.profile);
      const auto greedy = greedy_best_response(model, player, inst.profile);
      min_ratio = std::min(min_ratio, greedy.payoff / exact.payoff);
    }
  }
  return {min_ratio >= 0.63212 && min_ratio >= bound,
          "100 instances x 2 players, min greedy/exact = " + fmt("%.12f", min_ratio)};
}

Verdict counterexample() {
  GameConfig cfg;
  cfg.graph = build_counterexample(2, 1);
  cfg.budgets = {1, 1};
  cfg.alpha = 0.5;
  cfg.horizon = 1;
  cfg.epsilon = 1e-6;
  const UtilityModel model(cfg, Regime::horizon);
  const auto search = exhaustive_nash_check(model);
  const auto dynamics = best_response_dynamics(model, StrategyProfile(std::vector<SeedSet>{{0}, {1}}));
  const bool pass = search.equilibria.empty() && search.profiles == 225 && search.deviations == 6750 &&
                    dynamics.kind == OutcomeKind::cycle_detected;
  return {pass, std::to_string(search.profiles) + " profiles, " + std::to_string(search.deviations) +
                    " deviations, " + std::to_string(search.equilibria.size()) + " equilibria; dynamics " +
                    to_string(dynamics.kind)};
}

Verdict consensus_construction() {
  std::mt19937_64 rng(555);
  int with_equilibrium = 0, member = 0;
  for (int k = 0; k < 25; ++k) {
    GameConfig cfg;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 12)(rng);
    cfg.graph = random_graph(n, std::uniform_int_distribution<std::size_t>(1, 3)(rng), rng());
    cfg.budgets = {2, 2};
    const UtilityModel model(cfg, Regime::consensus);
    const auto search = exhaustive_nash_check(model);
    const auto built = consensus_equilibrium(model);
    with_equilibrium += search.equilibria.empty() ? 0 : 1;
    member += built.verified && std::find(search.equilibria.begin(), search.equilibria.end(), built.profile) !=
                                    search.equilibria.end();
  }
  return {with_equilibrium == 25 && member == 25,
          std::to_string(with_equilibrium) + "/25 with an equilibrium, " + std::to_string(member) +
              "/25 constructed profiles found by exhaustive search"};
}

Verdict stochasticity() {
  std::vector<Graph> graphs;
  for (std::size_t m = 2; m <= 4; ++m) {
    for (std::size_t b = 1; b <= 3; ++b) graphs.push_back(build_counterexample(m, b));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) graphs.push_back(random_graph(5 + seed, 1 + seed % 4, seed));
  double worst = 0.0;
  for (const auto& g : graphs) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      const auto gamma = influence_matrix(g, alpha);
      for (double s : gamma.row_sums()) worst = std::max(worst, std::abs(s - 1.0));
      for (std::size_t t : {1u, 5u, 20u}) {
        const auto table = diffusion_table(gamma, t);
        for (std::size_t u = 0; u < table.target_count(); ++u) {
          double sum = 0.0;
          for (std::size_t v = 0; v < table.source_count(); ++v) sum += table.at(static_cast<NodeId>(v), u);
          worst = std::max(worst, std::abs(sum - 1.0));
        }
      }
    }
  }
  return {worst <= 1e-9, std::to_string(graphs.size()) + " graphs, max |sum - 1| = " + fmt("%.3g", worst)};
}

Verdict cli_round_trip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nig_acceptance";
  fs::create_directories(dir);
  std::ostringstream out, err;
  bool ok = true;
  std::string detail;
  for (const auto& args : {std::vector<std::string>{"generate", "--counterexample", "3", "2", "-o",
                                                    (dir / "ce.txt").string()},
                           std::vector<std::string>{"generate", "--random", "25", "3", "9", "-o",
                                                    (dir / "rand.txt").string()}}) {
    ok = ok && run_cli(args, out, err) == 0;
  }
  for (const char* name : {"ce.txt", "rand.txt"}) {
    std::ifstream in(dir / name);
    ok = ok && in && validate(load_graph(in, false)).ok();
  }
  detail += ok ? "generated graphs reload and validate" : "generated graph failed to reload";

  std::ofstream(dir / "cycle.txt") << "nodes 2\nedge 0 1 1\nedge 1 0 1\n";
  std::ofstream(dir / "split.txt") << "player 0 seeds 0\nplayer 1 seeds 1\n";
  std::ostringstream sim_out;
  const int code = run_cli({"simulate", "--graph", (dir / "cycle.txt").string(), "--strategies",
                            (dir / "split.txt").string(), "--budgets", "1,1", "--structured"},
                           sim_out, err);
  const bool printed = code == 0 && sim_out.str().find("result payoffs 0.500000000000 0.500000000000\n") !=
                                        std::string::npos;
  detail += printed ? "; simulate prints 0.500000000000 0.500000000000" : "; simulate output mismatch";
  fs::remove_all(dir);
  return {ok && printed, detail};
}

}  // namespace

int main() {
  const auto corpus = fuzz_corpus(1000);
  criterion(1, "constant-sum payoffs", 30, [&] { return constant_sum(corpus); });
  criterion(2, "simulation vs closed form", 30, [&] { return equivalence(corpus); });
  criterion(3, "consensus limit", 60, consensus_limit);
  criterion(4, "monotonicity and submodularity", 120, submodularity_fuzz);
  criterion(5, "greedy approximation ratio", 300, greedy_ratio);
  criterion(6, "counterexample has no pure equilibrium", 10, counterexample);
  criterion(7, "consensus equilibrium construction", 120, consensus_construction);
  criterion(8, "stochasticity preservation", 60, stochasticity);
  criterion(9, "CLI round trip", 30, cli_round_trip);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
