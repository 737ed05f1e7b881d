#include "derand/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace derand {

// ---------------------------------------------------------------- union-find

UnionFind::UnionFind(std::size_t n) { reset(n); }

void UnionFind::reset(std::size_t n) {
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  rank_.assign(n, 0);
  sets_ = n;
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --sets_;
  return true;
}

// ---------------------------------------------------------------- graph

Graph::Graph(std::size_t n, const std::vector<Input>& edges) : n_(n) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
    if (!(e.w > 0)) throw std::invalid_argument("edge weights must be positive");
    if (e.u != e.v) edges_.push_back({e.u, e.v, e.w, i});
  }
  index_ids();
  if (pos_of_id_.size() < edges.size()) pos_of_id_.resize(edges.size(), kNoEdge);
}

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges) {
  Graph g(n);
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) throw std::out_of_range("edge endpoint out of range");
    if (e.u != e.v) g.edges_.push_back(e);
  }
  g.index_ids();
  return g;
}

void Graph::index_ids() {
  std::size_t bound = 0;
  for (const auto& e : edges_) bound = std::max(bound, e.id + 1);
  pos_of_id_.assign(bound, kNoEdge);
  for (std::size_t p = 0; p < edges_.size(); ++p) {
    if (pos_of_id_[edges_[p].id] != kNoEdge) throw std::invalid_argument("duplicate edge id");
    pos_of_id_[edges_[p].id] = p;
  }
}

std::size_t Graph::position(std::size_t id) const {
  if (!has_id(id)) throw std::out_of_range("unknown edge index " + std::to_string(id));
  return pos_of_id_[id];
}

EdgeSet Graph::edge_ids() const {
  EdgeSet ids;
  ids.reserve(edges_.size());
  for (const auto& e : edges_) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t Graph::add_edge(std::size_t u, std::size_t v, double w) {
  if (u >= n_ || v >= n_) throw std::out_of_range("edge endpoint out of range");
  if (!(w > 0)) throw std::invalid_argument("edge weights must be positive");
  const std::size_t id = pos_of_id_.size();
  pos_of_id_.push_back(kNoEdge);
  if (u == v) return kNoEdge;
  pos_of_id_[id] = edges_.size();
  edges_.push_back({u, v, w, id});
  return id;
}

bool Graph::unit_weights() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1.0; });
}

double Graph::total_weight() const {
  double t = 0;
  for (const auto& e : edges_) t += e.w;
  return t;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n_);
  for (std::size_t p = 0; p < edges_.size(); ++p) {
    adj[edges_[p].u].push_back({edges_[p].v, p});
    adj[edges_[p].v].push_back({edges_[p].u, p});
  }
  return adj;
}

// ---------------------------------------------------------------- components

std::vector<std::vector<std::size_t>> Components::members() const {
  std::vector<std::vector<std::size_t>> out(count);
  for (std::size_t v = 0; v < label.size(); ++v) out[label[v]].push_back(v);
  return out;
}

Components components(const Graph& g) {
  UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges()) uf.unite(e.u, e.v);
  Components c;
  c.label.assign(g.vertex_count(), 0);
  std::vector<std::size_t> root_label(g.vertex_count(), kNoEdge);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const std::size_t r = uf.find(v);
    if (root_label[r] == kNoEdge) root_label[r] = c.count++;
    c.label[v] = root_label[r];
  }
  return c;
}

std::size_t component_count(const Graph& g, const EdgeSet& ids) {
  UnionFind uf(g.vertex_count());
  for (auto id : ids) {
    const auto& e = g.edge_by_id(id);
    uf.unite(e.u, e.v);
  }
  return uf.sets();
}

bool is_forest(const Graph& g, const EdgeSet& ids) {
  UnionFind uf(g.vertex_count());
  for (auto id : ids) {
    const auto& e = g.edge_by_id(id);
    if (!uf.unite(e.u, e.v)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- min cut

namespace {

// Stoer-Wagner on one connected component; returns best value and the canonical side.
std::pair<double, std::vector<std::size_t>> stoer_wagner(const std::vector<std::size_t>& verts,
                                                         const std::vector<std::vector<double>>& w0) {
  const std::size_t s = verts.size();
  std::vector<std::vector<double>> w = w0;
  std::vector<std::vector<std::size_t>> group(s);
  for (std::size_t i = 0; i < s; ++i) group[i] = {verts[i]};
  std::vector<bool> merged(s, false);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_side;

  auto canonical = [&](std::vector<std::size_t> side) {
    std::sort(side.begin(), side.end());
    std::vector<std::size_t> other;
    std::set_difference(verts.begin(), verts.end(), side.begin(), side.end(), std::back_inserter(other));
    return std::min(side, other);
  };

  for (std::size_t phase = 0; phase + 1 < s; ++phase) {
    std::vector<double> key(s, 0.0);
    std::vector<bool> added(s, false);
    std::size_t prev = kNoEdge, last = kNoEdge;
    const std::size_t active = s - phase;
    for (std::size_t step = 0; step < active; ++step) {
      std::size_t pick = kNoEdge;
      for (std::size_t v = 0; v < s; ++v) {
        if (merged[v] || added[v]) continue;
        if (pick == kNoEdge || key[v] > key[pick]) pick = v;
      }
      added[pick] = true;
      prev = last;
      last = pick;
      for (std::size_t v = 0; v < s; ++v)
        if (!merged[v] && !added[v]) key[v] += w[pick][v];
    }
    const double cut = key[last];
    const double tol = std::isfinite(best) ? 1e-12 * std::max(1.0, std::abs(best)) : 0.0;
    if (best_side.empty() || cut < best - tol) {
      best = cut;
      best_side = canonical(group[last]);
    } else if (std::abs(cut - best) <= tol) {
      auto side = canonical(group[last]);
      if (side < best_side) best_side = side;
    }
    // merge last into prev
    group[prev].insert(group[prev].end(), group[last].begin(), group[last].end());
    merged[last] = true;
    for (std::size_t v = 0; v < s; ++v) {
      w[prev][v] += w[last][v];
      w[v][prev] = w[prev][v];
    }
    w[prev][prev] = 0;
  }
  return {best, best_side};
}

}  // namespace

MinCutResult min_cut(const Graph& g) {
  const Components comps = components(g);
  const auto members = comps.members();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_side;
  for (const auto& verts : members) {
    if (verts.size() < 2) continue;
    std::vector<std::size_t> local(g.vertex_count(), kNoEdge);
    for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = i;
    std::vector<std::vector<double>> w(verts.size(), std::vector<double>(verts.size(), 0.0));
    for (const auto& e : g.edges()) {
      if (local[e.u] == kNoEdge) continue;
      w[local[e.u]][local[e.v]] += e.w;
      w[local[e.v]][local[e.u]] += e.w;
    }
    auto [value, side] = stoer_wagner(verts, w);
    const double tol = std::isfinite(best) ? 1e-12 * std::max(1.0, std::abs(best)) : 0.0;
    if (best_side.empty() || value < best - tol || (std::abs(value - best) <= tol && side < best_side)) {
      best = value;
      best_side = side;
    }
  }
  if (best_side.empty()) throw std::invalid_argument("no non-empty cut");
  MinCutResult r;
  r.value = best;
  r.cut.side = best_side;
  std::vector<bool> in(g.vertex_count(), false);
  for (auto v : best_side) in[v] = true;
  for (const auto& e : g.edges())
    if (in[e.u] != in[e.v]) r.cut.edges.push_back(e.id);
  std::sort(r.cut.edges.begin(), r.cut.edges.end());
  return r;
}

std::size_t min_cut_size(const Graph& g) {
  return static_cast<std::size_t>(std::llround(min_cut(with_unit_weights(g)).value));
}

// ---------------------------------------------------------------- girth

std::optional<std::size_t> girth(const Graph& g) {
  const std::size_t n = g.vertex_count();
  const auto adj = g.adjacency();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n), parent(n);
  std::deque<std::size_t> queue;
  for (std::size_t root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), kNoEdge);
    dist[root] = 0;
    parent[root] = kNoEdge;
    queue.assign(1, root);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (best != std::numeric_limits<std::size_t>::max() && 2 * dist[u] + 1 >= best) break;
      for (auto [v, p] : adj[u]) {
        if (p == parent[u]) continue;
        if (dist[v] == kNoEdge) {
          dist[v] = dist[u] + 1;
          parent[v] = p;
          queue.push_back(v);
        } else {
          best = std::min(best, dist[u] + dist[v] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------- enumeration oracles

std::vector<CutSet> enumerate_cuts(const Graph& g, std::size_t max_size, const BruteForceCaps& caps) {
  if (g.vertex_count() > caps.cut_vertices)
    throw std::invalid_argument("enumerate_cuts: vertex count exceeds brute-force cap of " +
                                std::to_string(caps.cut_vertices));
  std::vector<CutSet> out;
  const auto members = components(g).members();
  for (const auto& verts : members) {
    const std::size_t s = verts.size();
    if (s < 2) continue;
    std::vector<std::size_t> local(g.vertex_count(), kNoEdge);
    for (std::size_t i = 0; i < s; ++i) local[verts[i]] = i;
    std::vector<const Edge*> comp_edges;
    for (const auto& e : g.edges())
      if (local[e.u] != kNoEdge) comp_edges.push_back(&e);
    // S always contains the smallest vertex of the component (local index 0).
    const std::uint64_t limit = std::uint64_t{1} << (s - 1);
    for (std::uint64_t mask = 0; mask + 1 < limit; ++mask) {
      const std::uint64_t in = (mask << 1) | 1u;
      EdgeSet cut;
      for (const Edge* e : comp_edges) {
        const bool a = (in >> local[e->u]) & 1u;
        const bool b = (in >> local[e->v]) & 1u;
        if (a != b) {
          cut.push_back(e->id);
          if (cut.size() > max_size) break;
        }
      }
      if (cut.empty() || cut.size() > max_size) continue;
      std::sort(cut.begin(), cut.end());
      CutSet c;
      c.edges = std::move(cut);
      for (std::size_t i = 0; i < s; ++i)
        if ((in >> i) & 1u) c.side.push_back(verts[i]);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<CycleSet> enumerate_cycles(const Graph& g, std::size_t max_len, const BruteForceCaps& caps) {
  if (g.edge_count() > caps.cycle_edges)
    throw std::invalid_argument("enumerate_cycles: edge count exceeds brute-force cap of " +
                                std::to_string(caps.cycle_edges));
  std::vector<CycleSet> out;
  if (max_len < 2) return out;
  const auto adj = g.adjacency();
  std::set<EdgeSet> seen;
  std::vector<bool> on_path(g.vertex_count(), false);
  std::vector<std::size_t> path_edges;
  // Cycles are charged to their smallest edge id e0: the rest is a simple path from e0.v back to e0.u
  // through larger ids.
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.edge(a).id < g.edge(b).id; });
  for (std::size_t p0 : order) {
    const Edge& e0 = g.edge(p0);
    const std::size_t target = e0.u;
    auto dfs = [&](auto&& self, std::size_t x) -> void {
      for (auto [y, p] : adj[x]) {
        const Edge& e = g.edge(p);
        if (e.id <= e0.id) continue;
        if (y == target) {
          if (path_edges.size() + 2 > max_len) continue;
          EdgeSet c = path_edges;
          c.push_back(e.id);
          c.push_back(e0.id);
          std::sort(c.begin(), c.end());
          if (seen.insert(c).second) out.push_back({std::move(c)});
          continue;
        }
        if (on_path[y] || path_edges.size() + 3 > max_len) continue;
        on_path[y] = true;
        path_edges.push_back(e.id);
        self(self, y);
        path_edges.pop_back();
        on_path[y] = false;
      }
    };
    on_path[e0.u] = true;
    on_path[e0.v] = true;
    dfs(dfs, e0.v);
    on_path[e0.u] = false;
    on_path[e0.v] = false;
  }
  return out;
}

// ---------------------------------------------------------------- surgery

Contraction contract(const Graph& g, const EdgeSet& ids) {
  UnionFind uf(g.vertex_count());
  std::vector<bool> in_set(g.id_bound(), false);
  for (auto id : ids) {
    const auto& e = g.edge_by_id(id);
    in_set[id] = true;
    uf.unite(e.u, e.v);
  }
  Contraction c;
  c.vertex_map.assign(g.vertex_count(), kNoEdge);
  std::vector<std::size_t> root_label(g.vertex_count(), kNoEdge);
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const std::size_t r = uf.find(v);
    if (root_label[r] == kNoEdge) root_label[r] = next++;
    c.vertex_map[v] = root_label[r];
  }
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    if (in_set[e.id]) continue;
    const std::size_t a = c.vertex_map[e.u], b = c.vertex_map[e.v];
    if (a == b) {
      c.induced_loops.push_back(e.id);
      continue;
    }
    kept.push_back({a, b, e.w, e.id});
  }
  std::sort(c.induced_loops.begin(), c.induced_loops.end());
  c.graph = Graph::from_edges(next, std::move(kept));
  return c;
}

Graph delete_edges(const Graph& g, const EdgeSet& ids) {
  std::vector<bool> drop(g.id_bound(), false);
  for (auto id : ids) {
    g.position(id);
    drop[id] = true;
  }
  std::vector<Edge> kept;
  for (const auto& e : g.edges())
    if (!drop[e.id]) kept.push_back(e);
  return Graph::from_edges(g.vertex_count(), std::move(kept));
}

Graph keep_edges(const Graph& g, const EdgeSet& ids) {
  std::vector<Edge> kept;
  kept.reserve(ids.size());
  for (auto id : ids) kept.push_back(g.edge_by_id(id));
  return Graph::from_edges(g.vertex_count(), std::move(kept));
}

Graph subdivide(const Graph& g, std::size_t s) {
  if (s < 1) throw std::invalid_argument("subdivide needs s >= 1");
  if (s == 1) return g;
  const std::size_t fresh = g.edge_count() * (s - 1);
  std::vector<Edge> out;
  std::size_t next_vertex = g.vertex_count();
  for (std::size_t p = 0; p < g.edge_count(); ++p) {
    const Edge& e = g.edge(p);
    std::size_t prev = e.u;
    for (std::size_t j = 0; j < s; ++j) {
      const std::size_t nxt = (j + 1 == s) ? e.v : next_vertex++;
      out.push_back({prev, nxt, e.w, p * s + j});
      prev = nxt;
    }
  }
  return Graph::from_edges(g.vertex_count() + fresh, std::move(out));
}

Graph duplicate_edges(const Graph& g, std::size_t s) {
  if (s < 1) throw std::invalid_argument("duplicate_edges needs s >= 1");
  if (s == 1) return g;
  std::vector<Edge> out;
  for (std::size_t p = 0; p < g.edge_count(); ++p) {
    const Edge& e = g.edge(p);
    for (std::size_t j = 0; j < s; ++j) out.push_back({e.u, e.v, e.w, p * s + j});
  }
  return Graph::from_edges(g.vertex_count(), std::move(out));
}

Graph with_unit_weights(const Graph& g) {
  std::vector<Edge> out = g.edges();
  for (auto& e : out) e.w = 1.0;
  return Graph::from_edges(g.vertex_count(), std::move(out));
}

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices) {
  std::vector<std::size_t> local(g.vertex_count(), kNoEdge);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = i;
  std::vector<Edge> out;
  for (const auto& e : g.edges())
    if (local[e.u] != kNoEdge && local[e.v] != kNoEdge) out.push_back({local[e.u], local[e.v], e.w, e.id});
  return Graph::from_edges(vertices.size(), std::move(out));
}

}  // namespace derand
