#include "nig/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace nig {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges) {
  if (node_count == 0) {
    throw std::invalid_argument("graph must have at least one node");
  }
  const auto n = static_cast<NodeId>(node_count);
  for (const auto& e : edges) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n) {
      throw std::out_of_range("edge (" + std::to_string(e.source) + ", " +
                              std::to_string(e.target) + ") references an unknown node");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("edge (" + std::to_string(e.source) + ", " +
                                  std::to_string(e.target) + ") has non-positive weight");
    }
    if (e.source == e.target) {
      throw std::invalid_argument("self-loop at node " + std::to_string(e.source));
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.target != b.target ? a.target < b.target : a.source < b.source;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].source == edges[k - 1].source && edges[k].target == edges[k - 1].target) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(edges[k].source) + ", " +
                                  std::to_string(edges[k].target) + ")");
    }
  }

  Graph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);

  g.in_offsets_.assign(node_count + 1, 0);
  g.out_offsets_.assign(node_count + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.in_offsets_[static_cast<std::size_t>(e.target) + 1];
    ++g.out_offsets_[static_cast<std::size_t>(e.source) + 1];
  }
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());

  g.out_targets_.resize(g.edges_.size());
  std::vector<std::size_t> cursor(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
  for (const auto& e : g.edges_) {
    g.out_targets_[cursor[static_cast<std::size_t>(e.source)]++] = e.target;
  }
  for (std::size_t u = 0; u < node_count; ++u) {
    std::sort(g.out_targets_.begin() + static_cast<std::ptrdiff_t>(g.out_offsets_[u]),
              g.out_targets_.begin() + static_cast<std::ptrdiff_t>(g.out_offsets_[u + 1]));
  }
  return g;
}

std::span<const Edge> Graph::in_edges(NodeId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= node_count_) {
    throw std::out_of_range("node id out of range");
  }
  const auto k = static_cast<std::size_t>(v);
  return std::span<const Edge>(edges_).subspan(in_offsets_[k], in_offsets_[k + 1] - in_offsets_[k]);
}

std::span<const NodeId> Graph::out_neighbors(NodeId u) const {
  if (u < 0 || static_cast<std::size_t>(u) >= node_count_) {
    throw std::out_of_range("node id out of range");
  }
  const auto k = static_cast<std::size_t>(u);
  return std::span<const NodeId>(out_targets_)
      .subspan(out_offsets_[k], out_offsets_[k + 1] - out_offsets_[k]);
}

double Graph::in_weight_sum(NodeId v) const {
  double sum = 0.0;
  for (const auto& e : in_edges(v)) sum += e.weight;
  return sum;
}

namespace {

// Marks every node reachable from node 0, following edges forward or backward.
std::vector<char> reachable_from_zero(const Graph& g, bool reverse) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId w) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    };
    if (reverse) {
      for (const auto& e : g.in_edges(u)) visit(e.source);
    } else {
      for (NodeId w : g.out_neighbors(u)) visit(w);
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate(const Graph& g) {
  ValidationReport report;
  if (g.node_count() == 0) {
    report.stochastic = false;
    report.strongly_connected = false;
    return report;
  }
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const double defect = std::abs(g.in_weight_sum(static_cast<NodeId>(v)) - 1.0);
    if (defect > kStochasticTolerance) {
      report.stochastic = false;
      report.offending_nodes.push_back({static_cast<NodeId>(v), DefectKind::weight_sum, defect});
    }
  }
  const auto forward = reachable_from_zero(g, false);
  const auto backward = reachable_from_zero(g, true);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (!forward[v] || !backward[v]) {
      report.strongly_connected = false;
      report.offending_nodes.push_back({static_cast<NodeId>(v), DefectKind::unreachable, 1.0});
    }
  }
  return report;
}

Graph normalize_incoming(const Graph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<double> sums(g.node_count(), 0.0);
  for (const auto& e : edges) sums[static_cast<std::size_t>(e.target)] += e.weight;
  for (auto& e : edges) e.weight /= sums[static_cast<std::size_t>(e.target)];
  return Graph::from_edges(g.node_count(), std::move(edges));
}

namespace {

template <typename T>
bool parse_number(const std::string& token, T& value) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Graph load_graph(std::istream& source, bool normalize) {
  std::string line;
  std::size_t line_no = 0;
  long long node_count = -1;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;

  while (std::getline(source, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string keyword;
    if (!(tokens >> keyword) || keyword.front() == '#') continue;

    std::vector<std::string> args;
    for (std::string t; tokens >> t;) args.push_back(t);

    if (keyword == "nodes") {
      if (node_count >= 0) throw ParseError(line_no, "repeated 'nodes' line");
      if (args.size() != 1 || !parse_number(args[0], node_count)) {
        throw ParseError(line_no, "expected 'nodes <n>'");
      }
      if (node_count <= 0) throw ParseError(line_no, "empty graph");
    } else if (keyword == "edge") {
      if (node_count < 0) throw ParseError(line_no, "'edge' before 'nodes'");
      Edge e{};
      if (args.size() != 3 || !parse_number(args[0], e.source) ||
          !parse_number(args[1], e.target)) {
        throw ParseError(line_no, "expected 'edge <u> <v> <w>'");
      }
      // from_chars for double is not available in every libstdc++; strtod is.
      char* end = nullptr;
      e.weight = std::strtod(args[2].c_str(), &end);
      if (end != args[2].c_str() + args[2].size()) {
        throw ParseError(line_no, "malformed weight '" + args[2] + "'");
      }
      if (e.source < 0 || e.source >= node_count || e.target < 0 || e.target >= node_count) {
        throw ParseError(line_no, "unknown node id");
      }
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw ParseError(line_no, "non-positive weight");
      }
      if (e.source == e.target) throw ParseError(line_no, "self-loop");
      edges.push_back(e);
      edge_lines.push_back(line_no);
    } else {
      throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (node_count < 0) throw ParseError(line_no, "empty graph: missing 'nodes' line");

  // Report duplicates against the line of their second occurrence.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(edges[a].source, edges[a].target) < std::pair(edges[b].source, edges[b].target);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = edges[order[k - 1]];
    const auto& cur = edges[order[k]];
    if (prev.source == cur.source && prev.target == cur.target) {
      throw ParseError(std::max(edge_lines[order[k - 1]], edge_lines[order[k]]), "duplicate edge");
    }
  }

  auto g = Graph::from_edges(static_cast<std::size_t>(node_count), std::move(edges));
  return normalize ? normalize_incoming(g) : g;
}

void write_graph(std::ostream& out, const Graph& g, const std::vector<std::string>& header) {
  for (const auto& h : header) out << "# " << h << '\n';
  out << "nodes " << g.node_count() << '\n';
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << "edge " << e.source << ' ' << e.target << ' ' << buf << '\n';
  }
}

std::size_t counterexample_ring_size(int players, int budget) {
  if (players < 2) throw std::invalid_argument("counterexample needs at least 2 players");
  if (budget < 1) throw std::invalid_argument("counterexample needs budget >= 1");
  return static_cast<std::size_t>(players) * static_cast<std::size_t>(budget + 1) + 1;
}

Graph build_counterexample(int players, int budget) {
  const std::size_t mu = counterexample_ring_size(players, budget);
  const std::size_t n = 3 * mu;
  auto id = [](std::size_t k) { return static_cast<NodeId>(k); };

  std::vector<Edge> edges;
  edges.reserve(mu * (static_cast<std::size_t>(budget) + 4));
  for (std::size_t i = 0; i < mu; ++i) {
    for (int k = 1; k <= budget; ++k) {
      edges.push_back({id(i), id((i + static_cast<std::size_t>(k)) % mu), 1.0});
    }
    const std::size_t left = mu + 2 * i;
    const std::size_t right = left + 1;
    edges.push_back({id(i), id(left), 1.0});
    edges.push_back({id(i), id(right), 1.0});
    edges.push_back({id(left), id(right), 1.0});
    edges.push_back({id(right), id(i), 1.0});
  }
  std::vector<std::size_t> in_degree(n, 0);
  for (const auto& e : edges) ++in_degree[static_cast<std::size_t>(e.target)];
  for (auto& e : edges) e.weight = 1.0 / static_cast<double>(in_degree[static_cast<std::size_t>(e.target)]);
  return Graph::from_edges(n, std::move(edges));
}

namespace {

// Portable draws: std::mt19937_64 output is fixed by the standard, the
// distribution adaptors are not.
std::size_t draw_index(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Graph random_graph(std::size_t node_count, std::size_t out_degree, std::uint64_t seed) {
  if (node_count < 2) throw std::invalid_argument("random graph needs at least 2 nodes");
  if (out_degree < 1 || out_degree >= node_count) {
    throw std::invalid_argument("out_degree must lie in [1, node_count)");
  }
  std::mt19937_64 rng(seed);

  std::vector<NodeId> tour(node_count);
  std::iota(tour.begin(), tour.end(), 0);
  for (std::size_t k = node_count - 1; k > 0; --k) {
    std::swap(tour[k], tour[draw_index(rng, k + 1)]);
  }

  std::vector<std::vector<char>> has_edge(node_count, std::vector<char>(node_count, 0));
  std::vector<Edge> edges;
  edges.reserve(node_count * out_degree);
  auto add = [&](NodeId u, NodeId v) {
    has_edge[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    edges.push_back({u, v, 0.1 + 0.9 * draw_unit(rng)});
  };
  for (std::size_t k = 0; k < node_count; ++k) {
    add(tour[k], tour[(k + 1) % node_count]);
  }
  for (std::size_t u = 0; u < node_count; ++u) {
    std::vector<NodeId> candidates;
    for (std::size_t v = 0; v < node_count; ++v) {
      if (v != u && !has_edge[u][v]) candidates.push_back(static_cast<NodeId>(v));
    }
    for (std::size_t extra = 1; extra < out_degree; ++extra) {
      const std::size_t pick = draw_index(rng, candidates.size());
      add(static_cast<NodeId>(u), candidates[pick]);
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return normalize_incoming(Graph::from_edges(node_count, std::move(edges)));
}

}  // namespace nig
