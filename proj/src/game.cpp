#include "nig/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nig {

bool improves(double candidate, double incumbent) noexcept {
  return candidate - incumbent > kImprovementTolerance * std::max(1.0, std::abs(incumbent));
}

void GameConfig::validate() const {
  const std::size_t m = player_count();
  if (m < 2) throw std::invalid_argument("a game needs at least 2 players");
  for (std::size_t i = 0; i < m; ++i) {
    if (budgets[i] < 1 || budgets[i] > graph.node_count()) {
      throw std::invalid_argument("budget of player " + std::to_string(i) +
                                  " must lie in [1, node count]");
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0 / (2.0 * static_cast<double>(m)))) {
    throw std::invalid_argument("epsilon must lie in (0, 1/(2m))");
  }
  const auto report = nig::validate(graph);
  if (!report.stochastic) throw std::invalid_argument("graph is not incoming-weight stochastic");
  if (!report.strongly_connected) throw std::invalid_argument("graph is not strongly connected");
}

void check_profile(const GameConfig& cfg, const StrategyProfile& s, bool allow_empty) {
  if (s.player_count() != cfg.player_count()) {
    throw std::invalid_argument("profile has " + std::to_string(s.player_count()) +
                                " players, game has " + std::to_string(cfg.player_count()));
  }
  for (std::size_t i = 0; i < s.player_count(); ++i) {
    const auto& seeds = s.seeds(i);
    if (seeds.empty() && !allow_empty) {
      throw std::invalid_argument("player " + std::to_string(i) + " has an empty strategy");
    }
    if (seeds.size() > cfg.budgets[i]) {
      throw std::invalid_argument("player " + std::to_string(i) + " exceeds budget " +
                                  std::to_string(cfg.budgets[i]));
    }
    for (NodeId v : seeds) {
      if (v < 0 || static_cast<std::size_t>(v) >= cfg.node_count()) {
        throw std::out_of_range("player " + std::to_string(i) + " seeds unknown node " +
                                std::to_string(v));
      }
    }
  }
}

double PayoffVector::sum() const noexcept {
  double total = 0.0;
  for (double p : payoffs) total += p;
  return total;
}

PayoffVector utility(const GameConfig& cfg, const StrategyProfile& s) {
  cfg.validate();
  check_profile(cfg, s);
  const auto gamma = influence_matrix(cfg.graph, cfg.alpha);
  const auto final_state = evolve(initialize(cfg.node_count(), s, cfg.epsilon), gamma, cfg.horizon);

  const std::size_t n = cfg.node_count();
  const std::size_t m = cfg.player_count();
  PayoffVector result{std::vector<double>(m, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    const auto x = final_state.node(static_cast<NodeId>(v));
    double norm = 0.0;
    for (double xi : x) norm += xi;
    for (std::size_t i = 0; i < m; ++i) result.payoffs[i] += x[i] / norm;
  }
  for (double& p : result.payoffs) p /= static_cast<double>(n);
  return result;
}

PayoffVector consensus_utility(const GameConfig& cfg, const StrategyProfile& s) {
  check_profile(cfg, s);
  return UtilityModel(cfg, Regime::consensus).payoffs(s);
}

PayoffVector utility_closed_form(const GameConfig& cfg, const StrategyProfile& s) {
  check_profile(cfg, s);
  return UtilityModel(cfg, Regime::horizon).payoffs(s);
}

namespace {

InfluenceTable build_shares(const GameConfig& cfg, Regime regime, const DiffusionOptions& options) {
  cfg.validate();
  const auto gamma = influence_matrix(cfg.graph, cfg.alpha);
  if (regime == Regime::horizon) return diffusion_table(gamma, cfg.horizon, options);
  auto c = eigenvector_weights(gamma);
  return InfluenceTable(cfg.node_count(), 1, std::move(c.weights));
}

struct SeededNode {
  NodeId node;
  std::size_t players;  // m_u(s)
};

// Distinct seeded nodes of the profile with their seeding multiplicity.
std::vector<SeededNode> seeded_nodes(std::span<const SeedSet> strategies) {
  std::vector<NodeId> all;
  for (const auto& s : strategies) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  std::vector<SeededNode> out;
  for (NodeId v : all) {
    if (!out.empty() && out.back().node == v) {
      ++out.back().players;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

std::size_t multiplicity(const std::vector<SeededNode>& seeded, NodeId v) {
  auto it = std::lower_bound(seeded.begin(), seeded.end(), v,
                             [](const SeededNode& s, NodeId x) { return s.node < x; });
  return it->players;
}

}  // namespace

UtilityModel::UtilityModel(const GameConfig& cfg, Regime regime, const DiffusionOptions& options)
    : cfg_(cfg), regime_(regime), shares_(build_shares(cfg, regime, options)) {
  share_totals_.assign(shares_.target_count(), 0.0);
  for (std::size_t u = 0; u < shares_.source_count(); ++u) {
    const auto row = shares_.row(static_cast<NodeId>(u));
    for (std::size_t t = 0; t < row.size(); ++t) share_totals_[t] += row[t];
  }
}

void UtilityModel::accumulate(std::span<const SeedSet> strategies, std::vector<double>& f) const {
  const std::size_t k = shares_.target_count();
  const std::size_t m = strategies.size();
  const auto seeded = seeded_nodes(strategies);
  for (const auto& s : seeded) {
    if (s.node < 0 || static_cast<std::size_t>(s.node) >= shares_.source_count()) {
      throw std::out_of_range("seed node out of range");
    }
  }

  // Unseeded share per target, taken as the complement of the seeded share.
  std::vector<double> unseeded = share_totals_;
  for (const auto& s : seeded) {
    const auto row = shares_.row(s.node);
    for (std::size_t t = 0; t < k; ++t) unseeded[t] -= row[t];
  }

  f.assign(m * k, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double* fi = f.data() + i * k;
    for (NodeId u : strategies[i]) {
      const double split = 1.0 / static_cast<double>(multiplicity(seeded, u));
      const auto row = shares_.row(u);
      for (std::size_t t = 0; t < k; ++t) fi[t] += row[t] * split;
    }
    for (std::size_t t = 0; t < k; ++t) fi[t] += cfg_.epsilon * unseeded[t];
  }
}

std::vector<double> UtilityModel::evaluate(std::span<const SeedSet> strategies) const {
  const std::size_t k = shares_.target_count();
  const std::size_t m = strategies.size();
  std::vector<double> f;
  accumulate(strategies, f);

  std::vector<double> payoffs(m, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += f[i * k + t];
    for (std::size_t i = 0; i < m; ++i) payoffs[i] += f[i * k + t] / total;
  }
  for (double& p : payoffs) p /= static_cast<double>(k);
  return payoffs;
}

double UtilityModel::evaluate(std::span<const SeedSet> strategies, std::size_t player) const {
  if (player >= strategies.size()) throw std::out_of_range("player index out of range");
  return evaluate(strategies)[player];
}

PayoffVector UtilityModel::payoffs(const StrategyProfile& s) const {
  return PayoffVector{evaluate(s.strategies())};
}

double marginal_gain(const UtilityModel& model, std::size_t player, const SeedSet& partial,
                     NodeId v, const StrategyProfile& others) {
  if (player >= others.player_count()) throw std::out_of_range("player index out of range");
  if (std::find(partial.begin(), partial.end(), v) != partial.end()) {
    throw std::invalid_argument("node already in the partial seed set");
  }
  if (partial.size() >= model.config().budgets.at(player)) {
    throw std::invalid_argument("partial seed set already exhausts the budget");
  }
  std::vector<SeedSet> strategies(others.strategies().begin(), others.strategies().end());
  strategies[player] = make_seed_set(partial);
  const double before = model.evaluate(strategies, player);
  strategies[player].push_back(v);
  strategies[player] = make_seed_set(std::move(strategies[player]));
  return model.evaluate(strategies, player) - before;
}

double marginal_gain(const GameConfig& cfg, std::size_t player, const SeedSet& partial, NodeId v,
                     const StrategyProfile& others) {
  return marginal_gain(UtilityModel(cfg, Regime::horizon), player, partial, v, others);
}

}  // namespace nig
