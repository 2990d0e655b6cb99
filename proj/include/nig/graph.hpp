#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nig {

using NodeId = std::int32_t;

/// Incoming weights of every node must sum to one within this bound.
inline constexpr double kStochasticTolerance = 1e-9;

struct Edge {
  NodeId source;
  NodeId target;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Malformed graph or profile text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/*
  Immutable weighted digraph over dense node ids 0..n-1.

  Edges are stored grouped by target (then source), so the incoming
  neighborhood N+(v) of a node is a contiguous slice. Construction rejects
  out-of-range ids, non-positive weights, self-loops and duplicate pairs.
  Stochasticity and strong connectivity are not enforced here; see validate().
*/
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// All edges, ordered by (target, source).
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Edge> in_edges(NodeId v) const;
  std::span<const NodeId> out_neighbors(NodeId u) const;

  double in_weight_sum(NodeId v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> in_offsets_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
};

enum class DefectKind { weight_sum, unreachable };

struct NodeDefect {
  NodeId node;
  DefectKind kind;
  // |sum of incoming weights - 1| for weight_sum; 1 for unreachable.
  double magnitude;
};

struct ValidationReport {
  bool stochastic = true;
  bool strongly_connected = true;
  std::vector<NodeDefect> offending_nodes;

  bool ok() const noexcept { return stochastic && strongly_connected; }
};

ValidationReport validate(const Graph& g);

/// Rescales each node's incoming weights to sum to one. Nodes without
/// incoming edges are left as they are.
Graph normalize_incoming(const Graph& g);

/// Reads the edge-list format:
///   # comment
///   nodes <n>
///   edge <u> <v> <w>
Graph load_graph(std::istream& source, bool normalize);

/// Writes the edge-list format with round-trippable weights. `header` lines
/// are emitted as comments.
void write_graph(std::ostream& out, const Graph& g,
                 const std::vector<std::string>& header = {});

/*
  Non-existence construction for pure equilibria with m players and
  symmetric budget b.

  mu = m(b+1)+1 central nodes with ids 0..mu-1 form a ring where v_i feeds
  v_{i+k mod mu} for k = 1..b. Each central v_i owns two petals, left at
  mu+2i and right at mu+2i+1, wired v_i->left, v_i->right, left->right,
  right->v_i. Every edge (u,v) weighs 1/indegree(v).
*/
Graph build_counterexample(int players, int budget);

/// Number of central (ring) nodes in build_counterexample(players, budget).
std::size_t counterexample_ring_size(int players, int budget);

/// Random strongly connected digraph: a random Hamiltonian cycle plus
/// out_degree-1 extra random successors per node, raw weights uniform in
/// [0.1, 1) and incoming weights normalized. Fully determined by `seed`.
Graph random_graph(std::size_t node_count, std::size_t out_degree, std::uint64_t seed);

}  // namespace nig
