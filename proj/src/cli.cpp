#include "nig/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nig/dynamics.hpp"
#include "nig/game.hpp"
#include "nig/graph.hpp"
#include "nig/report.hpp"
#include "nig/solver.hpp"

namespace nig {

namespace {

struct Common {
  std::string graph_path;
  bool normalize = false;
  double alpha = kDefaultAlpha;
  std::size_t horizon = 1;
  double epsilon = kDefaultEpsilon;
  bool structured = false;
  std::size_t workers = 1;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  return in;
}

Graph read_graph_file(const std::string& path, bool normalize) {
  auto in = open_input(path);
  try {
    return load_graph(in, normalize);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::map<std::size_t, SeedSet> read_profile_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_profile_entries(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<std::string> format_all(std::span<const double> values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(format_number(v));
  return out;
}

std::vector<std::string> format_sizes(const std::vector<std::size_t>& values) {
  std::vector<std::string> out;
  for (auto v : values) out.push_back(std::to_string(v));
  return out;
}

void echo_common(Report& report, const Common& c, bool with_game) {
  report.param("graph", c.graph_path);
  report.param("normalize", c.normalize ? "true" : "false");
  report.param("alpha", format_number(c.alpha));
  if (with_game) {
    report.param("horizon", std::to_string(c.horizon));
    report.param("epsilon", format_number(c.epsilon));
  }
}

void echo_profile(Report& report, const std::string& prefix, const StrategyProfile& s) {
  for (std::size_t i = 0; i < s.player_count(); ++i) {
    report.result(prefix + "." + std::to_string(i), format_set(s.seeds(i)));
  }
}

void add_common_options(CLI::App* cmd, Common& c, bool with_game) {
  cmd->add_option("--graph", c.graph_path, "Edge-list graph file")->required();
  cmd->add_flag("--normalize", c.normalize, "Rescale incoming weights to sum to 1 on load");
  cmd->add_option("--alpha", c.alpha, "Mixing weight in (0,1)")->capture_default_str();
  if (with_game) {
    cmd->add_option("--horizon,-T", c.horizon, "Number of dynamic steps T")->capture_default_str();
    cmd->add_option("--epsilon", c.epsilon, "Opinion held by unseeded nodes")->capture_default_str();
  }
  cmd->add_flag("--structured", c.structured, "Line-delimited machine-readable report");
}

void add_workers_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--workers", c.workers, "Worker threads for solver scans")
      ->envname("NIG_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string strategies_path;
  std::vector<std::size_t> budgets;
  bool opinions = false;
  bool trace = false;
  double consensus_tol = 1e-8;
};

void cmd_simulate(const SimulateArgs& a, Report& report) {
  const auto& c = a.common;
  GameConfig cfg;
  cfg.graph = read_graph_file(c.graph_path, c.normalize);
  const auto entries = read_profile_file(a.strategies_path);
  const std::size_t m = entries.empty() ? 0 : entries.rbegin()->first + 1;
  const auto profile = profile_from_entries(entries, m);
  cfg.budgets = a.budgets;
  if (cfg.budgets.empty()) {
    for (std::size_t i = 0; i < m; ++i) cfg.budgets.push_back(std::max<std::size_t>(1, profile.seeds(i).size()));
  }
  cfg.alpha = c.alpha;
  cfg.horizon = c.horizon;
  cfg.epsilon = c.epsilon;
  cfg.validate();
  check_profile(cfg, profile);

  echo_common(report, c, true);
  report.param("strategies", a.strategies_path);
  report.param("budgets", format_sizes(cfg.budgets));
  report.param("consensus_tol", format_number(a.consensus_tol));
  report.param("nodes", std::to_string(cfg.node_count()));
  report.param("players", std::to_string(m));

  const auto payoffs = utility(cfg, profile);
  report.result("payoffs", format_all(payoffs.payoffs));
  report.result("payoff_sum", format_number(payoffs.sum()));

  if (a.opinions || a.trace) {
    const auto gamma = influence_matrix(cfg.graph, cfg.alpha);
    const auto start = initialize(cfg.node_count(), profile, cfg.epsilon);
    std::function<void(const OpinionState&)> observe;
    if (a.trace) {
      observe = [&](const OpinionState& s) { report.row("trace", s.time(), format_all(s.values())); };
    }
    const auto final_state = evolve(start, gamma, cfg.horizon, observe);
    if (a.opinions) {
      report.result("consensus_reached", consensus_reached(final_state, a.consensus_tol) ? "true" : "false");
      for (std::size_t v = 0; v < final_state.node_count(); ++v) {
        report.row("opinions", v, format_all(final_state.node(static_cast<NodeId>(v))));
      }
    }
  }
}

// centrality ----------------------------------------------------------------

struct CentralityArgs {
  Common common;
  std::optional<std::size_t> horizon;
  bool eigen = false;
  bool squaring = false;
  double tol = kDefaultEigenTolerance;
  std::size_t max_iter = kDefaultEigenMaxIterations;
};

void cmd_centrality(const CentralityArgs& a, Report& report) {
  const auto& c = a.common;
  const auto g = read_graph_file(c.graph_path, c.normalize);
  const auto gamma = influence_matrix(g, c.alpha);
  echo_common(report, c, false);
  report.param("nodes", std::to_string(g.node_count()));

  if (a.eigen) {
    report.param("mode", "eigen");
    report.param("tol", format_number(a.tol));
    report.param("max_iter", std::to_string(a.max_iter));
    const auto w = eigenvector_weights(gamma, a.tol, a.max_iter);
    report.result("weights", format_all(w.weights));
    double sum = 0.0;
    for (double x : w.weights) sum += x;
    report.result("weight_sum", format_number(sum));
    report.result("iterations", std::to_string(w.iterations));
    report.result("residual", format_number(w.residual));
    return;
  }

  report.param("mode", "diffusion");
  report.param("horizon", std::to_string(*a.horizon));
  report.param("method", a.squaring ? "repeated_squaring" : "repeated_products");
  report.param("workers", std::to_string(c.workers));
  const auto table = diffusion_table(
      gamma, *a.horizon,
      {a.squaring ? PowerMethod::repeated_squaring : PowerMethod::repeated_products, c.workers});
  std::vector<double> target_sums(g.node_count(), 0.0);
  for (std::size_t v = 0; v < table.source_count(); ++v) {
    const auto row = table.row(static_cast<NodeId>(v));
    for (std::size_t u = 0; u < row.size(); ++u) target_sums[u] += row[u];
  }
  report.result("target_sums", format_all(target_sums));
  for (std::size_t v = 0; v < table.source_count(); ++v) {
    report.row("influence", v, format_all(table.row(static_cast<NodeId>(v))));
  }
}

// best-response -------------------------------------------------------------

struct BestResponseArgs {
  Common common;
  std::size_t player = 0;
  std::string opponents_path;
  std::size_t budget = 1;
  bool exact = false;
  bool greedy = false;
  bool ratio = false;
  bool consensus = false;
  std::uint64_t cap = kDefaultEnumerationCap;
};

void cmd_best_response(const BestResponseArgs& a, Report& report, std::ostream& err) {
  const auto& c = a.common;
  GameConfig cfg;
  cfg.graph = read_graph_file(c.graph_path, c.normalize);
  const auto entries = read_profile_file(a.opponents_path);
  std::size_t m = a.player + 1;
  if (!entries.empty()) m = std::max(m, entries.rbegin()->first + 1);
  const auto others = profile_from_entries(entries, m, a.player);
  cfg.budgets.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    cfg.budgets[i] = i == a.player ? a.budget : std::max<std::size_t>(1, others.seeds(i).size());
  }
  cfg.alpha = c.alpha;
  cfg.horizon = c.horizon;
  cfg.epsilon = c.epsilon;
  cfg.validate();
  for (std::size_t i = 0; i < m; ++i) {
    if (i != a.player && others.seeds(i).empty()) {
      throw std::invalid_argument("player " + std::to_string(i) + " has an empty strategy");
    }
  }

  const bool use_exact = a.exact;
  echo_common(report, c, true);
  report.param("opponents", a.opponents_path);
  report.param("player", std::to_string(a.player));
  report.param("budgets", format_sizes(cfg.budgets));
  report.param("method", use_exact ? "exact" : "greedy");
  report.param("regime", a.consensus ? "consensus" : "horizon");
  report.param("cap", std::to_string(a.cap));
  report.param("workers", std::to_string(c.workers));

  const UtilityModel model(cfg, a.consensus ? Regime::consensus : Regime::horizon);
  const SolverOptions options{a.cap, c.workers};
  auto exact = [&] {
    try {
      return exact_best_response(model, a.player, others, options);
    } catch (const CapExceeded& e) {
      throw CapExceeded(std::string(e.what()) + "; use --greedy");
    }
  };
  const auto br = use_exact ? exact() : greedy_best_response(model, a.player, others, options);
  report.result("strategy", format_set(br.strategy));
  report.result("payoff", format_number(br.payoff));
  report.result("evaluations", std::to_string(br.evaluations));

  if (a.ratio) {
    const auto greedy = use_exact ? greedy_best_response(model, a.player, others, options) : br;
    try {
      const auto best = use_exact ? br : exact_best_response(model, a.player, others, options);
      report.result("greedy_payoff", format_number(greedy.payoff));
      report.result("exact_payoff", format_number(best.payoff));
      report.result("ratio", format_number(greedy.payoff / best.payoff));
    } catch (const CapExceeded& e) {
      err << "note: ratio unavailable: " << e.what() << '\n';
      report.result("ratio", "n/a");
    }
  }
}

// nash ----------------------------------------------------------------------

struct NashArgs {
  Common common;
  std::vector<std::size_t> budgets;
  bool dynamics = false;
  bool exhaustive = false;
  bool construct = false;
  bool consensus = false;
  bool greedy = false;
  std::string initial_path;
  std::size_t max_rounds = kDefaultMaxRounds;
  std::optional<std::uint64_t> shuffle_seed;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::uint64_t profile_cap = kDefaultProfileCap;
};

// Players take consecutive node ids in turn, wrapping around the graph.
StrategyProfile default_initial_profile(const GameConfig& cfg) {
  std::vector<SeedSet> strategies(cfg.player_count());
  std::size_t next = 0;
  for (std::size_t i = 0; i < cfg.player_count(); ++i) {
    std::vector<NodeId> nodes;
    for (std::size_t k = 0; k < cfg.budgets[i]; ++k) {
      nodes.push_back(static_cast<NodeId>(next++ % cfg.node_count()));
    }
    strategies[i] = make_seed_set(std::move(nodes));
  }
  return StrategyProfile(std::move(strategies));
}

void cmd_nash(const NashArgs& a, Report& report) {
  const auto& c = a.common;
  GameConfig cfg;
  cfg.graph = read_graph_file(c.graph_path, c.normalize);
  cfg.budgets = a.budgets;
  cfg.alpha = c.alpha;
  cfg.horizon = c.horizon;
  cfg.epsilon = c.epsilon;
  cfg.validate();

  echo_common(report, c, true);
  report.param("budgets", format_sizes(cfg.budgets));
  report.param("regime", a.consensus ? "consensus" : "horizon");
  report.param("workers", std::to_string(c.workers));
  const UtilityModel model(cfg, a.consensus ? Regime::consensus : Regime::horizon);
  const SolverOptions solver{a.cap, c.workers};

  if (a.exhaustive) {
    report.param("mode", "exhaustive");
    report.param("profile_cap", std::to_string(a.profile_cap));
    const auto search = exhaustive_nash_check(model, {a.profile_cap, c.workers});
    report.result("profiles", std::to_string(search.profiles));
    report.result("evaluations", std::to_string(search.evaluations));
    report.result("deviations", std::to_string(search.deviations));
    report.result("equilibria", std::to_string(search.equilibria.size()));
    for (std::size_t k = 0; k < search.equilibria.size(); ++k) {
      std::vector<std::string> sets;
      for (const auto& s : search.equilibria[k].strategies()) sets.push_back(format_set(s));
      report.row("equilibrium", k, sets);
    }
    return;
  }

  if (a.construct) {
    if (!a.consensus) throw std::invalid_argument("--construct requires --consensus");
    report.param("mode", "construct");
    report.param("cap", std::to_string(a.cap));
    const auto eq = consensus_equilibrium(model, solver);
    std::vector<std::string> order;
    for (NodeId v : eq.node_order) order.push_back(std::to_string(v));
    report.result("node_order", order);
    echo_profile(report, "seeds", eq.profile);
    report.result("verified", eq.verified ? "true" : "false");
    return;
  }

  StrategyProfile initial = default_initial_profile(cfg);
  if (!a.initial_path.empty()) {
    initial = profile_from_entries(read_profile_file(a.initial_path), cfg.player_count());
  }
  report.param("mode", "dynamics");
  report.param("responses", a.greedy ? "greedy" : "exact");
  report.param("max_rounds", std::to_string(a.max_rounds));
  report.param("order", a.shuffle_seed ? "shuffled" : "ascending");
  if (a.shuffle_seed) report.param("shuffle_seed", std::to_string(*a.shuffle_seed));
  report.param("cap", std::to_string(a.cap));
  for (std::size_t i = 0; i < initial.player_count(); ++i) {
    report.param("initial." + std::to_string(i), format_set(initial.seeds(i)));
  }

  const auto outcome =
      best_response_dynamics(model, initial, {a.max_rounds, !a.greedy, a.shuffle_seed, solver});
  report.result("kind", to_string(outcome.kind));
  report.result("certified", outcome.certified ? "true" : "false");
  report.result("turns", std::to_string(outcome.turns));
  report.result("moves", std::to_string(outcome.trace.size()));
  echo_profile(report, "seeds", outcome.profile);
  const auto payoffs = model.payoffs(outcome.profile);
  report.result("payoffs", format_all(payoffs.payoffs));
  for (std::size_t k = 0; k < outcome.trace.size(); ++k) {
    const auto& mv = outcome.trace[k];
    report.row("trace", k,
               {std::to_string(mv.player), format_set(mv.before), format_set(mv.after),
                format_number(mv.gain)});
  }
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
  std::vector<int> counterexample;
  std::vector<std::uint64_t> random;
  std::string output;
  bool structured = false;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out, Report& report, bool& print_report) {
  Graph g;
  std::vector<std::string> header;
  if (!a.counterexample.empty()) {
    g = build_counterexample(a.counterexample[0], a.counterexample[1]);
    header.push_back("counterexample players=" + std::to_string(a.counterexample[0]) +
                     " budget=" + std::to_string(a.counterexample[1]) + " ring=" +
                     std::to_string(counterexample_ring_size(a.counterexample[0], a.counterexample[1])));
  } else {
    g = random_graph(a.random[0], a.random[1], a.random[2]);
    header.push_back("random nodes=" + std::to_string(a.random[0]) + " out_degree=" +
                     std::to_string(a.random[1]) + " seed=" + std::to_string(a.random[2]));
  }

  if (a.output.empty()) {
    write_graph(out, g, header);
    print_report = false;
    return;
  }
  std::ofstream file(a.output);
  if (!file) throw std::runtime_error(a.output + ": cannot open for writing");
  write_graph(file, g, header);
  if (!file.flush()) throw std::runtime_error(a.output + ": write failed");
  report.param("output", a.output);
  report.param("generator", header.front());
  report.result("nodes", std::to_string(g.node_count()));
  report.result("edges", std::to_string(g.edge_count()));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Seeded opinion-dynamics game toolkit", "nig"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the dynamics for a strategy profile and report payoffs");
  add_common_options(sim_cmd, sim.common, true);
  sim_cmd->add_option("--strategies", sim.strategies_path, "Strategy profile file")->required();
  sim_cmd->add_option("--budgets", sim.budgets, "Per-player budgets (default: seed counts)")->delimiter(',');
  sim_cmd->add_flag("--opinions", sim.opinions, "Report final opinions and the consensus verdict");
  sim_cmd->add_flag("--trace", sim.trace, "Report the opinion matrix after every step");
  sim_cmd->add_option("--consensus-tol", sim.consensus_tol, "Spread bound for consensus")->capture_default_str();

  CentralityArgs cen;
  auto* cen_cmd = app.add_subcommand("centrality", "Diffusion centralities or consensus weights");
  add_common_options(cen_cmd, cen.common, false);
  auto* cen_h = cen_cmd->add_option("--horizon,-T", cen.horizon, "Horizon for the diffusion table");
  auto* cen_e = cen_cmd->add_flag("--eigen", cen.eigen, "Consensus (left eigenvector) weights");
  cen_h->excludes(cen_e);
  cen_cmd->add_flag("--squaring", cen.squaring, "Use repeated squaring for the diffusion table");
  cen_cmd->add_option("--tol", cen.tol, "Power-iteration tolerance")->capture_default_str();
  cen_cmd->add_option("--max-iter", cen.max_iter, "Power-iteration limit")->capture_default_str();
  add_workers_option(cen_cmd, cen.common);

  BestResponseArgs br;
  auto* br_cmd = app.add_subcommand("best-response", "Best response of one player to fixed opponents");
  add_common_options(br_cmd, br.common, true);
  br_cmd->add_option("--player", br.player, "Responding player (0-based)")->required();
  br_cmd->add_option("--opponents", br.opponents_path, "Opponent strategies file")->required();
  br_cmd->add_option("--budget", br.budget, "Budget of the responding player")->required()->check(CLI::PositiveNumber);
  auto* br_x = br_cmd->add_flag("--exact", br.exact, "Exhaustive search over full-budget sets");
  auto* br_g = br_cmd->add_flag("--greedy", br.greedy, "Greedy marginal-gain search (default)");
  br_x->excludes(br_g);
  br_cmd->add_flag("--ratio", br.ratio, "Also run the other method and report greedy/exact");
  br_cmd->add_flag("--consensus", br.consensus, "Score payoffs at consensus instead of the horizon");
  br_cmd->add_option("--cap", br.cap, "Enumeration cap for exact search")->capture_default_str();
  add_workers_option(br_cmd, br.common);

  NashArgs nash;
  auto* nash_cmd = app.add_subcommand("nash", "Search for pure equilibria");
  add_common_options(nash_cmd, nash.common, true);
  nash_cmd->add_option("--budgets", nash.budgets, "Per-player budgets, comma separated")->required()->delimiter(',');
  auto* n_d = nash_cmd->add_flag("--dynamics", nash.dynamics, "Best-response dynamics (default)");
  auto* n_x = nash_cmd->add_flag("--exhaustive", nash.exhaustive, "Check every full-budget profile");
  auto* n_c = nash_cmd->add_flag("--construct", nash.construct, "Sequential construction at consensus");
  n_d->excludes(n_x)->excludes(n_c);
  n_x->excludes(n_c);
  nash_cmd->add_flag("--consensus", nash.consensus, "Score payoffs at consensus instead of the horizon");
  nash_cmd->add_flag("--greedy", nash.greedy, "Greedy instead of exact responses in dynamics");
  nash_cmd->add_option("--initial", nash.initial_path, "Starting profile for dynamics");
  nash_cmd->add_option("--max-rounds", nash.max_rounds, "Round limit for dynamics")->capture_default_str();
  nash_cmd->add_option("--shuffle-seed", nash.shuffle_seed, "Shuffle player order each round");
  nash_cmd->add_option("--cap", nash.cap, "Enumeration cap for exact responses")->capture_default_str();
  nash_cmd->add_option("--profile-cap", nash.profile_cap, "Profile cap for --exhaustive")->capture_default_str();
  add_workers_option(nash_cmd, nash.common);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a graph in edge-list format");
  auto* g_c = gen_cmd->add_option("--counterexample", gen.counterexample, "Players m and budget b")->expected(2);
  auto* g_r = gen_cmd->add_option("--random", gen.random, "Nodes n, out-degree d and seed")->expected(3);
  g_c->excludes(g_r);
  gen_cmd->add_option("--output,-o", gen.output, "Output file (default: standard output)");
  gen_cmd->add_flag("--structured", gen.structured, "Line-delimited report when writing to a file");

  std::vector<const char*> argv{"nig"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    bool structured = false;
    bool print_report = true;
    std::unique_ptr<Report> report;
    if (sim_cmd->parsed()) {
      report = std::make_unique<Report>("simulate");
      structured = sim.common.structured;
      cmd_simulate(sim, *report);
    } else if (cen_cmd->parsed()) {
      if (!cen.eigen && !cen.horizon) throw std::invalid_argument("centrality needs --horizon or --eigen");
      report = std::make_unique<Report>("centrality");
      structured = cen.common.structured;
      cmd_centrality(cen, *report);
    } else if (br_cmd->parsed()) {
      report = std::make_unique<Report>("best-response");
      structured = br.common.structured;
      cmd_best_response(br, *report, err);
    } else if (nash_cmd->parsed()) {
      report = std::make_unique<Report>("nash");
      structured = nash.common.structured;
      cmd_nash(nash, *report);
    } else {
      if (gen.counterexample.empty() && gen.random.empty()) {
        throw std::invalid_argument("generate needs --counterexample or --random");
      }
      report = std::make_unique<Report>("generate");
      structured = gen.structured;
      cmd_generate(gen, out, *report, print_report);
    }
    if (print_report) {
      const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - started;
      report->set_timing_ms(elapsed.count());
      report->write(out, structured);
    }
    return out.good() ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nig
