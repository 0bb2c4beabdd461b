#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace gmfg {

/// Dense symmetric 0/1 matrix with zero diagonal.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  /// Validates symmetry, zero diagonal and 0/1 entries; throws std::invalid_argument.
  static AdjacencyMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }

  /// Adds the undirected edge {i, j}; i == j is rejected.
  void add_edge(std::size_t i, std::size_t j);

  std::size_t degree(std::size_t i) const;
  std::size_t edge_count() const;
  /// Unordered pairs (i, j) with i < j, in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  /// Neighbor lists, ascending.
  std::vector<std::vector<std::uint32_t>> neighbor_lists() const;

  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

enum class GraphonKind { uniform_attachment, ranked_attachment, erdos_renyi, step };

/// Symmetric kernel W: [0,1]^2 -> [0,1]. Immutable after construction.
class Graphon {
 public:
  /// W(x, y) = 1 - max(x, y)
  static Graphon uniform_attachment();
  /// W(x, y) = 1 - x y
  static Graphon ranked_attachment();
  /// W(x, y) = p
  static Graphon erdos_renyi(double p);
  /// Step graphon of a finite graph on the cells ((i-1)/N, i/N], x = 0 in cell 1.
  static Graphon step(AdjacencyMatrix adjacency);

  GraphonKind kind() const { return kind_; }
  double p() const { return p_; }
  const AdjacencyMatrix& adjacency() const { return adjacency_; }

  double operator()(double x, double y) const {
    switch (kind_) {
      case GraphonKind::uniform_attachment:
        return 1.0 - (x < y ? y : x);
      case GraphonKind::ranked_attachment:
        return 1.0 - x * y;
      case GraphonKind::erdos_renyi:
        return p_;
      case GraphonKind::step:
        return adjacency_(cell(x), cell(y)) ? 1.0 : 0.0;
    }
    return 0.0;
  }
  double eval(double x, double y) const { return (*this)(x, y); }

  /// Short name: "unif", "rank", "er" or "step".
  std::string name() const;

  /// 0-based cell of x for the step kind.
  std::size_t cell(double x) const;

 private:
  Graphon(GraphonKind kind, double p) : kind_(kind), p_(p) {}

  GraphonKind kind_;
  double p_ = 0.0;
  AdjacencyMatrix adjacency_;
};

/// Parses "uniform_attachment"/"unif", "ranked_attachment"/"rank",
/// "erdos_renyi"/"er" (with p). Throws std::invalid_argument otherwise.
Graphon make_graphon(const std::string& kind, double p = 0.5);

struct SampledGraph {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  AdjacencyMatrix adjacency;
};

/// W-random graph: alphas i.i.d. uniform, then one Bernoulli(W(alpha_i, alpha_j))
/// draw per unordered pair i < j. Pure function of (g, n, seed).
SampledGraph sample_w_random_graph(const Graphon& g, std::size_t n, std::uint64_t seed);

Graphon step_graphon_from_graph(const SampledGraph& graph);

/// {n, seed, alphas, edges: [[i, j], ...]} with 0-based i < j.
nlohmann::json to_json(const SampledGraph& graph);
SampledGraph sampled_graph_from_json(const nlohmann::json& j);

}  // namespace gmfg
