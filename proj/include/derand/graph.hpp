#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace derand {

// Sorted list of edge ids.
using EdgeSet = std::vector<std::size_t>;

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double w = 1.0;
  std::size_t id = 0;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0);
  void reset(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t sets() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
  std::size_t sets_ = 0;
};

// Undirected multigraph. Edge ids are stable under deletion and contraction; self-loops are never stored.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n) {}

  struct Input {
    std::size_t u, v;
    double w = 1.0;
  };
  // Edge i of the input receives id i; self-loops are dropped (their ids stay unused).
  Graph(std::size_t n, const std::vector<Input>& edges);
  // Keeps the ids carried by the edges.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t pos) const { return edges_[pos]; }

  // One past the largest id ever assigned in this graph.
  std::size_t id_bound() const { return pos_of_id_.size(); }
  bool has_id(std::size_t id) const { return id < pos_of_id_.size() && pos_of_id_[id] != kNoEdge; }
  std::size_t position(std::size_t id) const;
  const Edge& edge_by_id(std::size_t id) const { return edges_[position(id)]; }
  EdgeSet edge_ids() const;

  // Returns the new id, or kNoEdge when u == v.
  std::size_t add_edge(std::size_t u, std::size_t v, double w = 1.0);
  bool unit_weights() const;
  double total_weight() const;

  // adjacency()[v] = list of (neighbour, edge position)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;

 private:
  void index_ids();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> pos_of_id_;
};

struct Components {
  std::vector<std::size_t> label;  // label[v] in [0, count), numbered by smallest member
  std::size_t count = 0;
  std::vector<std::vector<std::size_t>> members() const;
};

struct CutSet {
  EdgeSet edges;
  std::vector<std::size_t> side;  // sorted vertex set S certifying the cut
};

struct CycleSet {
  EdgeSet edges;
};

struct MinCutResult {
  double value = 0;
  CutSet cut;
};

struct Contraction {
  Graph graph;
  std::vector<std::size_t> vertex_map;  // old vertex -> new vertex
  EdgeSet induced_loops;                // edges outside the contracted set that became loops
};

struct BruteForceCaps {
  std::size_t cut_vertices = 20;
  std::size_t cycle_edges = 40;
};

Components components(const Graph& g);
// Components of (V, ids) for a subset of edges.
std::size_t component_count(const Graph& g, const EdgeSet& ids);

MinCutResult min_cut(const Graph& g);
// Cardinality of the minimum non-empty cut (unit weights regardless of stored weights).
std::size_t min_cut_size(const Graph& g);

std::optional<std::size_t> girth(const Graph& g);

std::vector<CutSet> enumerate_cuts(const Graph& g, std::size_t max_size, const BruteForceCaps& caps = {});
std::vector<CycleSet> enumerate_cycles(const Graph& g, std::size_t max_len, const BruteForceCaps& caps = {});

Contraction contract(const Graph& g, const EdgeSet& ids);
Graph delete_edges(const Graph& g, const EdgeSet& ids);
Graph keep_edges(const Graph& g, const EdgeSet& ids);
Graph subdivide(const Graph& g, std::size_t s);
Graph duplicate_edges(const Graph& g, std::size_t s);
Graph with_unit_weights(const Graph& g);
// Induced subgraph on a vertex subset; vertex i of the result is vertices[i]; edge ids kept.
Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices);

bool is_forest(const Graph& g, const EdgeSet& ids);

// Edge-list text format: "n m" then m lines "u v [w]", 1-indexed.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace derand
