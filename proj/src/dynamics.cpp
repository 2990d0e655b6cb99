#include "nig/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nig/parallel.hpp"

namespace nig {

InfluenceMatrix influence_matrix(const Graph& g, double alpha, MatrixStorage storage) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in the open interval (0, 1)");
  }
  const auto report = validate(g);
  if (!report.stochastic) {
    throw std::invalid_argument("graph incoming weights do not sum to 1 at every node");
  }
  if (!report.strongly_connected) {
    throw std::invalid_argument("graph is not strongly connected");
  }

  const std::size_t n = g.node_count();
  InfluenceMatrix gamma;
  gamma.n_ = n;
  gamma.alpha_ = alpha;
  const bool dense = storage == MatrixStorage::dense ||
                     (storage == MatrixStorage::automatic && n <= kDenseNodeLimit);
  if (dense) {
    gamma.dense_.assign(n * n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      gamma.dense_[v * n + v] = 1.0 - alpha;
      for (const auto& e : g.in_edges(static_cast<NodeId>(v))) {
        gamma.dense_[v * n + static_cast<std::size_t>(e.source)] += alpha * e.weight;
      }
    }
    return gamma;
  }

  gamma.row_offsets_.reserve(n + 1);
  gamma.row_offsets_.push_back(0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto in = g.in_edges(static_cast<NodeId>(v));
    bool diagonal_done = false;
    for (const auto& e : in) {
      if (!diagonal_done && static_cast<std::size_t>(e.source) > v) {
        gamma.columns_.push_back(static_cast<NodeId>(v));
        gamma.values_.push_back(1.0 - alpha);
        diagonal_done = true;
      }
      gamma.columns_.push_back(e.source);
      gamma.values_.push_back(alpha * e.weight);
    }
    if (!diagonal_done) {
      gamma.columns_.push_back(static_cast<NodeId>(v));
      gamma.values_.push_back(1.0 - alpha);
    }
    gamma.row_offsets_.push_back(gamma.columns_.size());
  }
  return gamma;
}

double InfluenceMatrix::entry(NodeId v, NodeId u) const {
  if (v < 0 || u < 0 || static_cast<std::size_t>(v) >= n_ || static_cast<std::size_t>(u) >= n_) {
    throw std::out_of_range("influence matrix index out of range");
  }
  const auto row = static_cast<std::size_t>(v);
  if (is_dense()) return dense_[row * n_ + static_cast<std::size_t>(u)];
  for (std::size_t k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k) {
    if (columns_[k] == u) return values_[k];
  }
  return 0.0;
}

std::vector<double> InfluenceMatrix::row_sums() const {
  std::vector<double> sums(n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    if (is_dense()) {
      for (std::size_t u = 0; u < n_; ++u) sums[v] += dense_[v * n_ + u];
    } else {
      for (std::size_t k = row_offsets_[v]; k < row_offsets_[v + 1]; ++k) sums[v] += values_[k];
    }
  }
  return sums;
}

void InfluenceMatrix::apply(std::span<const double> x, std::span<double> y,
                            std::size_t columns) const {
  if (x.size() != n_ * columns || y.size() != n_ * columns) {
    throw std::invalid_argument("dimension mismatch in influence matrix product");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    double* out = y.data() + v * columns;
    auto accumulate = [&](std::size_t u, double g) {
      const double* in = x.data() + u * columns;
      for (std::size_t j = 0; j < columns; ++j) out[j] += g * in[j];
    };
    if (is_dense()) {
      for (std::size_t u = 0; u < n_; ++u) {
        const double g = dense_[v * n_ + u];
        if (g != 0.0) accumulate(u, g);
      }
    } else {
      for (std::size_t k = row_offsets_[v]; k < row_offsets_[v + 1]; ++k) {
        accumulate(static_cast<std::size_t>(columns_[k]), values_[k]);
      }
    }
  }
}

void InfluenceMatrix::apply_transposed(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw std::invalid_argument("dimension mismatch in influence matrix product");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    if (is_dense()) {
      for (std::size_t u = 0; u < n_; ++u) y[u] += dense_[v * n_ + u] * x[v];
    } else {
      for (std::size_t k = row_offsets_[v]; k < row_offsets_[v + 1]; ++k) {
        y[static_cast<std::size_t>(columns_[k])] += values_[k] * x[v];
      }
    }
  }
}

std::vector<double> InfluenceMatrix::to_dense() const {
  if (is_dense()) return dense_;
  std::vector<double> out(n_ * n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    for (std::size_t k = row_offsets_[v]; k < row_offsets_[v + 1]; ++k) {
      out[v * n_ + static_cast<std::size_t>(columns_[k])] = values_[k];
    }
  }
  return out;
}

OpinionState::OpinionState(std::size_t nodes, std::size_t players, std::size_t time)
    : nodes_(nodes), players_(players), time_(time), values_(nodes * players, 0.0) {}

OpinionState initialize(std::size_t node_count, const StrategyProfile& s, double epsilon) {
  const std::size_t m = s.player_count();
  if (m == 0) throw std::invalid_argument("profile has no players");
  if (!(epsilon > 0.0 && epsilon < 1.0 / (2.0 * static_cast<double>(m)))) {
    throw std::invalid_argument("epsilon must lie in (0, 1/(2m))");
  }
  OpinionState state(node_count, m);
  std::vector<std::size_t> seeded_by(node_count, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (NodeId v : s.seeds(i)) {
      if (v < 0 || static_cast<std::size_t>(v) >= node_count) {
        throw std::out_of_range("strategy of player " + std::to_string(i) +
                                " references unknown node " + std::to_string(v));
      }
      ++seeded_by[static_cast<std::size_t>(v)];
    }
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    if (seeded_by[v] == 0) {
      for (std::size_t i = 0; i < m; ++i) state.at(static_cast<NodeId>(v), i) = epsilon;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (NodeId v : s.seeds(i)) {
      state.at(v, i) = 1.0 / static_cast<double>(seeded_by[static_cast<std::size_t>(v)]);
    }
  }
  return state;
}

OpinionState step(const OpinionState& state, const InfluenceMatrix& gamma) {
  if (state.node_count() != gamma.size()) {
    throw std::invalid_argument("opinion state and influence matrix disagree on node count");
  }
  OpinionState next(state.node_count(), state.player_count(), state.time() + 1);
  gamma.apply(state.values(), next.values(), state.player_count());
  return next;
}

OpinionState evolve(const OpinionState& state, const InfluenceMatrix& gamma, std::size_t t_steps) {
  return evolve(state, gamma, t_steps, nullptr);
}

OpinionState evolve(const OpinionState& state, const InfluenceMatrix& gamma, std::size_t t_steps,
                    const std::function<void(const OpinionState&)>& observe) {
  if (state.node_count() != gamma.size()) {
    throw std::invalid_argument("opinion state and influence matrix disagree on node count");
  }
  OpinionState current = state;
  OpinionState scratch(state.node_count(), state.player_count());
  if (observe) observe(current);
  for (std::size_t t = 0; t < t_steps; ++t) {
    gamma.apply(current.values(), scratch.values(), current.player_count());
    scratch.set_time(current.time() + 1);
    std::swap(current, scratch);
    if (observe) observe(current);
  }
  return current;
}

bool consensus_reached(const OpinionState& state, double tol) {
  for (std::size_t i = 0; i < state.player_count(); ++i) {
    double lo = state.at(0, i), hi = lo;
    for (std::size_t v = 1; v < state.node_count(); ++v) {
      lo = std::min(lo, state.at(static_cast<NodeId>(v), i));
      hi = std::max(hi, state.at(static_cast<NodeId>(v), i));
    }
    if (!(hi - lo < tol)) return false;
  }
  return true;
}

InfluenceVector diffusion_centrality(const InfluenceMatrix& gamma, std::size_t t_steps, NodeId v) {
  const std::size_t n = gamma.size();
  if (v < 0 || static_cast<std::size_t>(v) >= n) throw std::out_of_range("node out of range");
  std::vector<double> x(n, 0.0), y(n, 0.0);
  x[static_cast<std::size_t>(v)] = 1.0;
  for (std::size_t t = 0; t < t_steps; ++t) {
    gamma.apply(x, y, 1);
    std::swap(x, y);
  }
  return {v, std::move(x)};
}

InfluenceTable::InfluenceTable(std::size_t sources, std::size_t targets, std::vector<double> values)
    : sources_(sources), targets_(targets), values_(std::move(values)) {
  if (values_.size() != sources_ * targets_) {
    throw std::invalid_argument("influence table size mismatch");
  }
}

namespace {

std::vector<double> dense_product(const std::vector<double>& a, const std::vector<double>& b,
                                  std::size_t n) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  }
  return c;
}

}  // namespace

InfluenceTable diffusion_table(const InfluenceMatrix& gamma, std::size_t t_steps,
                               const DiffusionOptions& options) {
  const std::size_t n = gamma.size();
  std::vector<double> table(n * n, 0.0);

  if (options.method == PowerMethod::repeated_squaring) {
    std::vector<double> power(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) power[k * n + k] = 1.0;
    std::vector<double> base = gamma.to_dense();
    for (std::size_t e = t_steps; e > 0; e >>= 1) {
      if (e & 1U) power = dense_product(power, base, n);
      if (e > 1) base = dense_product(base, base, n);
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) table[v * n + u] = power[u * n + v];
    }
    return InfluenceTable(n, n, std::move(table));
  }

  // Each worker evolves the identity columns of its own block of sources.
  parallel_chunks(n, options.workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    const std::size_t width = end - begin;
    if (width == 0) return;
    std::vector<double> x(n * width, 0.0), y(n * width, 0.0);
    for (std::size_t j = 0; j < width; ++j) x[(begin + j) * width + j] = 1.0;
    for (std::size_t t = 0; t < t_steps; ++t) {
      gamma.apply(x, y, width);
      std::swap(x, y);
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t j = 0; j < width; ++j) table[(begin + j) * n + u] = x[u * width + j];
    }
  });
  return InfluenceTable(n, n, std::move(table));
}

ConsensusWeights eigenvector_weights(const InfluenceMatrix& gamma, double tol,
                                     std::size_t max_iter) {
  const std::size_t n = gamma.size();
  if (n == 0) throw std::invalid_argument("empty influence matrix");
  std::vector<double> c(n, 1.0 / static_cast<double>(n)), next(n, 0.0);

  auto normalize = [](std::vector<double>& w) {
    double sum = 0.0;
    for (double x : w) sum += x;
    for (double& x : w) x /= sum;
  };

  for (std::size_t it = 1; it <= max_iter; ++it) {
    gamma.apply_transposed(c, next);
    normalize(next);
    double diff = 0.0;
    for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs(next[k] - c[k]));
    std::swap(c, next);
    if (diff < tol) {
      gamma.apply_transposed(c, next);
      double residual = 0.0;
      for (std::size_t k = 0; k < n; ++k) residual = std::max(residual, std::abs(next[k] - c[k]));
      return {std::move(c), it, residual};
    }
  }
  throw ConvergenceError("power iteration did not converge within " + std::to_string(max_iter) +
                         " iterations");
}

}  // namespace nig
