#include "gmfg/graphon.hpp"

#include <cmath>
#include <stdexcept>

#include "gmfg/rng.hpp"

namespace gmfg {

AdjacencyMatrix AdjacencyMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  AdjacencyMatrix adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("adjacency matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (v != rows[j].at(i)) throw std::invalid_argument("adjacency matrix is not symmetric");
      if (i == j && v != 0) throw std::invalid_argument("adjacency matrix has a self-loop");
      adj.bits_[i * n + j] = static_cast<std::uint8_t>(v);
    }
  }
  return adj;
}

void AdjacencyMatrix::add_edge(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_) throw std::out_of_range("edge endpoint out of range");
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  bits_[i * n_ + j] = 1;
  bits_[j * n_ + i] = 1;
}

std::size_t AdjacencyMatrix::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += bits_[i * n_ + j];
  return d;
}

std::size_t AdjacencyMatrix::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) count += bits_[i * n_ + j];
  return count;
}

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyMatrix::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (bits_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

std::vector<std::vector<std::uint32_t>> AdjacencyMatrix::neighbor_lists() const {
  std::vector<std::vector<std::uint32_t>> out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (bits_[i * n_ + j]) out[i].push_back(static_cast<std::uint32_t>(j));
  return out;
}

Graphon Graphon::uniform_attachment() { return Graphon(GraphonKind::uniform_attachment, 0.0); }

Graphon Graphon::ranked_attachment() { return Graphon(GraphonKind::ranked_attachment, 0.0); }

Graphon Graphon::erdos_renyi(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("erdos_renyi: p must lie in [0, 1]");
  return Graphon(GraphonKind::erdos_renyi, p);
}

Graphon Graphon::step(AdjacencyMatrix adjacency) {
  if (adjacency.size() == 0) throw std::invalid_argument("step graphon needs at least one node");
  Graphon g(GraphonKind::step, 0.0);
  g.adjacency_ = std::move(adjacency);
  return g;
}

std::size_t Graphon::cell(double x) const {
  const std::size_t n = adjacency_.size();
  // cell i (1-based) is ((i-1)/N, i/N]; x = 0 belongs to cell 1
  const double scaled = std::ceil(x * static_cast<double>(n));
  std::size_t i = scaled < 1.0 ? 1 : static_cast<std::size_t>(scaled);
  if (i > n) i = n;
  return i - 1;
}

std::string Graphon::name() const {
  switch (kind_) {
    case GraphonKind::uniform_attachment: return "unif";
    case GraphonKind::ranked_attachment: return "rank";
    case GraphonKind::erdos_renyi: return "er";
    case GraphonKind::step: return "step";
  }
  return "unknown";
}

Graphon make_graphon(const std::string& kind, double p) {
  if (kind == "uniform_attachment" || kind == "unif") return Graphon::uniform_attachment();
  if (kind == "ranked_attachment" || kind == "rank") return Graphon::ranked_attachment();
  if (kind == "erdos_renyi" || kind == "er") return Graphon::erdos_renyi(p);
  throw std::invalid_argument("unknown graphon kind '" + kind + "'");
}

SampledGraph sample_w_random_graph(const Graphon& g, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_w_random_graph: N must be positive");
  SampledGraph out;
  out.n = n;
  out.seed = seed;
  out.alphas.resize(n);
  out.adjacency = AdjacencyMatrix(n);

  Rng rng(derive_seed(seed, {0x67726170ULL}));
  for (auto& a : out.alphas) a = rng.uniform();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < g(out.alphas[i], out.alphas[j])) out.adjacency.add_edge(i, j);
    }
  }
  return out;
}

Graphon step_graphon_from_graph(const SampledGraph& graph) { return Graphon::step(graph.adjacency); }

nlohmann::json to_json(const SampledGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : graph.adjacency.edges()) edges.push_back({i, j});
  return {{"n", graph.n}, {"seed", graph.seed}, {"alphas", graph.alphas}, {"edges", edges}};
}

SampledGraph sampled_graph_from_json(const nlohmann::json& j) {
  SampledGraph g;
  g.n = j.at("n").get<std::size_t>();
  g.seed = j.value("seed", std::uint64_t{0});
  g.alphas = j.at("alphas").get<std::vector<double>>();
  if (g.n == 0) throw std::invalid_argument("graph: n must be positive");
  if (g.alphas.size() != g.n) throw std::invalid_argument("graph: alphas length differs from n");
  for (double a : g.alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("graph: alpha outside [0, 1]");
  g.adjacency = AdjacencyMatrix(g.n);
  for (const auto& e : j.at("edges")) {
    const auto i = e.at(0).get<std::size_t>();
    const auto k = e.at(1).get<std::size_t>();
    if (!(i < k)) throw std::invalid_argument("graph: edges must be listed with i < j");
    g.adjacency.add_edge(i, k);
  }
  return g;
}

}  // namespace gmfg
