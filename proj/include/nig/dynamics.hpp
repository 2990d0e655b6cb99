#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nig/graph.hpp"
#include "nig/strategy.hpp"

namespace nig {

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr double kDefaultEigenTolerance = 1e-12;
inline constexpr std::size_t kDefaultEigenMaxIterations = 1'000'000;

/// Above this node count influence_matrix() switches to row-compressed storage.
inline constexpr std::size_t kDenseNodeLimit = 2000;

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatrixStorage { automatic, dense, sparse };

/*
  The consensus propagator Gamma = (1 - alpha) I + alpha A^T, so that
  gamma(v, u) = (1 - alpha)[v == u] + alpha w(u, v). Rows are stochastic
  whenever the graph is. Immutable once built.
*/
class InfluenceMatrix {
 public:
  std::size_t size() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  bool is_dense() const noexcept { return !dense_.empty(); }

  double entry(NodeId v, NodeId u) const;
  std::vector<double> row_sums() const;

  /// y = Gamma x for an n x columns row-major block.
  void apply(std::span<const double> x, std::span<double> y, std::size_t columns) const;
  /// y = Gamma^T x for a single column.
  void apply_transposed(std::span<const double> x, std::span<double> y) const;

  /// Row-major n x n copy of the entries.
  std::vector<double> to_dense() const;

 private:
  friend InfluenceMatrix influence_matrix(const Graph&, double, MatrixStorage);

  std::size_t n_ = 0;
  double alpha_ = 0.0;
  std::vector<double> dense_;
  // Row-compressed form; diagonal entries are stored like any other.
  std::vector<std::size_t> row_offsets_;
  std::vector<NodeId> columns_;
  std::vector<double> values_;
};

/// Requires 0 < alpha < 1 and a graph that passes validate().
InfluenceMatrix influence_matrix(const Graph& g, double alpha,
                                 MatrixStorage storage = MatrixStorage::automatic);

/// Opinions x^v_i(t), n nodes by m players, row-major.
class OpinionState {
 public:
  OpinionState(std::size_t nodes, std::size_t players, std::size_t time = 0);

  std::size_t time() const noexcept { return time_; }
  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t player_count() const noexcept { return players_; }

  double at(NodeId v, std::size_t player) const {
    return values_[static_cast<std::size_t>(v) * players_ + player];
  }
  double& at(NodeId v, std::size_t player) {
    return values_[static_cast<std::size_t>(v) * players_ + player];
  }
  std::span<const double> node(NodeId v) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(v) * players_, players_);
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  void set_time(std::size_t t) noexcept { time_ = t; }

 private:
  std::size_t nodes_;
  std::size_t players_;
  std::size_t time_;
  std::vector<double> values_;
};

/// Seeded nodes take the average seed opinion of the players choosing them;
/// all other nodes hold epsilon toward every player. Requires
/// 0 < epsilon < 1/(2m) and valid node ids; empty seed sets are allowed.
OpinionState initialize(std::size_t node_count, const StrategyProfile& s, double epsilon);

OpinionState step(const OpinionState& state, const InfluenceMatrix& gamma);

OpinionState evolve(const OpinionState& state, const InfluenceMatrix& gamma, std::size_t t_steps);

/// As evolve(), calling `observe` on the initial state and after every step.
OpinionState evolve(const OpinionState& state, const InfluenceMatrix& gamma, std::size_t t_steps,
                    const std::function<void(const OpinionState&)>& observe);

/// True iff every player's opinion spread max_v - min_v is below `tol`.
bool consensus_reached(const OpinionState& state, double tol);

/// c^v = Gamma^T delta[v]: entry u is the share of u's opinion at time t_steps
/// that came from v's initial opinion.
struct InfluenceVector {
  NodeId source;
  std::vector<double> weights;
};

InfluenceVector diffusion_centrality(const InfluenceMatrix& gamma, std::size_t t_steps, NodeId v);

enum class PowerMethod {
  repeated_products,  // t_steps block products, O(t nnz n)
  repeated_squaring,  // dense binary powering, O(n^3 log t)
};

/// All n diffusion-centrality vectors at one horizon; row v holds c^v.
class InfluenceTable {
 public:
  InfluenceTable(std::size_t sources, std::size_t targets, std::vector<double> values);

  std::size_t source_count() const noexcept { return sources_; }
  std::size_t target_count() const noexcept { return targets_; }
  double at(NodeId source, std::size_t target) const {
    return values_[static_cast<std::size_t>(source) * targets_ + target];
  }
  std::span<const double> row(NodeId source) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(source) * targets_,
                                                    targets_);
  }

 private:
  std::size_t sources_;
  std::size_t targets_;
  std::vector<double> values_;
};

struct DiffusionOptions {
  PowerMethod method = PowerMethod::repeated_products;
  std::size_t workers = 1;
};

InfluenceTable diffusion_table(const InfluenceMatrix& gamma, std::size_t t_steps,
                               const DiffusionOptions& options = {});

/// Left eigenvector of Gamma for eigenvalue 1, entries summing to one.
struct ConsensusWeights {
  std::vector<double> weights;
  std::size_t iterations = 0;
  // max_u |(c Gamma)_u - c_u| at the returned c.
  double residual = 0.0;
};

/// Power iteration on Gamma^T from the uniform vector. Throws
/// ConvergenceError when max_iter passes without successive iterates
/// agreeing to within `tol` in max-norm.
ConsensusWeights eigenvector_weights(const InfluenceMatrix& gamma,
                                     double tol = kDefaultEigenTolerance,
                                     std::size_t max_iter = kDefaultEigenMaxIterations);

}  // namespace nig
