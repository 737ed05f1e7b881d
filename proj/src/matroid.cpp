#include "derand/matroid.hpp"

#include <algorithm>

namespace derand {

std::string kind_name(MatroidKind k) { return k == MatroidKind::graphic ? "graphic" : "cographic"; }

MatroidKind kind_from_name(const std::string& name) {
  if (name == "graphic") return MatroidKind::graphic;
  if (name == "cographic") return MatroidKind::cographic;
  throw std::invalid_argument("unknown matroid kind '" + name + "'");
}

bool ind_graphic(const Graph& g, const EdgeSet& s) { return is_forest(g, s); }

bool ind_cographic(const Graph& g, const EdgeSet& s) {
  std::vector<bool> drop(g.id_bound(), false);
  for (auto id : s) {
    g.position(id);
    drop[id] = true;
  }
  UnionFind all(g.vertex_count()), rest(g.vertex_count());
  for (const auto& e : g.edges()) {
    all.unite(e.u, e.v);
    if (!drop[e.id]) rest.unite(e.u, e.v);
  }
  return all.sets() == rest.sets();
}

bool independent(const Graph& g, MatroidKind kind, const EdgeSet& s) {
  return kind == MatroidKind::graphic ? ind_graphic(g, s) : ind_cographic(g, s);
}

std::size_t matroid_rank(const Graph& g, MatroidKind kind, const EdgeSet& s) {
  const std::size_t n = g.vertex_count();
  if (kind == MatroidKind::graphic) return n - component_count(g, s);
  // r*(X) = |X| - r(E) + r(E \ X)
  std::vector<bool> in(g.id_bound(), false);
  for (auto id : s) in[id] = true;
  EdgeSet rest;
  for (const auto& e : g.edges())
    if (!in[e.id]) rest.push_back(e.id);
  const std::size_t r_all = n - component_count(g, g.edge_ids());
  const std::size_t r_rest = n - component_count(g, rest);
  return s.size() + r_rest - r_all;
}

// ---------------------------------------------------------------- ledger

void QueryLedger::begin_round(const std::string& label) {
  if (open_) throw RoundViolation("begin_round while round '" + current_.label + "' is open");
  open_ = true;
  current_ = {label, 0};
}

RoundRecord QueryLedger::end_round() {
  if (!open_) throw RoundViolation("end_round without an open round");
  open_ = false;
  rounds_.push_back(current_);
  return current_;
}

void QueryLedger::count_query() {
  if (!open_) throw RoundViolation("query issued outside a round");
  ++current_.queries;
  ++issued_;
}

std::vector<std::size_t> QueryLedger::per_round() const {
  std::vector<std::size_t> out;
  for (const auto& r : rounds_) out.push_back(r.queries);
  return out;
}

nlohmann::json QueryLedger::to_json() const {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& r : rounds_) {
    if (phases.empty() || phases.back()["label"] != r.label)
      phases.push_back({{"label", r.label}, {"rounds", nlohmann::json::array()}});
    phases.back()["rounds"].push_back(r.queries);
  }
  return {{"phases", phases}, {"total_rounds", total_rounds()}, {"total_queries", total_queries()}};
}

// ---------------------------------------------------------------- session

OracleSession::OracleSession(Graph ground, MatroidKind kind) : ground_(std::move(ground)), kind_(kind) {
  state_.assign(ground_.id_bound(), State::absent);
  for (const auto& e : ground_.edges()) state_[e.id] = State::free;
  stamp_.assign(ground_.id_bound(), 0);
  uf_parent_.assign(ground_.vertex_count(), 0);
  uf_stamp_.assign(ground_.vertex_count(), 0);
  rebuild_cache();
}

EdgeSet OracleSession::elements() const {
  EdgeSet out;
  for (std::size_t id = 0; id < state_.size(); ++id)
    if (state_[id] == State::free) out.push_back(id);
  return out;
}

void OracleSession::validate(const EdgeSet& s) {
  ++epoch_;
  for (auto id : s) {
    if (id >= state_.size() || state_[id] == State::absent)
      throw std::out_of_range("unknown edge index " + std::to_string(id));
    if (state_[id] == State::contracted) throw std::invalid_argument("query intersects the contracted set");
    if (state_[id] == State::deleted) throw std::invalid_argument("query intersects the deleted set");
    if (stamp_[id] == epoch_) throw std::invalid_argument("query lists an element twice");
    stamp_[id] = epoch_;
  }
}

void OracleSession::rebuild_cache() {
  const std::size_t n = ground_.vertex_count();
  UnionFind uf(n);
  for (auto id : contracted_) {
    const auto& e = ground_.edge_by_id(id);
    uf.unite(e.u, e.v);
  }
  label_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) label_[v] = uf.find(v);

  // G - T: spanning forest and component count
  forest_.assign(ground_.id_bound(), false);
  UnionFind rest(n);
  for (const auto& e : ground_.edges()) {
    if (state_[e.id] == State::contracted) continue;
    if (rest.unite(e.u, e.v)) forest_[e.id] = true;
  }
  base_components_ = rest.sets();
}

bool OracleSession::answer(const EdgeSet& s) const {
  if (kind_ == MatroidKind::graphic) {
    // forest test on the contracted graph with a lazily reset union-find
    ++epoch_;
    auto find = [&](std::size_t x) {
      if (uf_stamp_[x] != epoch_) {
        uf_stamp_[x] = epoch_;
        uf_parent_[x] = x;
      }
      while (uf_parent_[x] != x) {
        std::size_t p = uf_parent_[x];
        if (uf_stamp_[p] != epoch_) {
          uf_stamp_[p] = epoch_;
          uf_parent_[p] = p;
        }
        uf_parent_[x] = uf_parent_[p];
        x = p;
      }
      return x;
    };
    for (auto id : s) {
      const auto& e = ground_.edge_by_id(id);
      const std::size_t a = find(label_[e.u]), b = find(label_[e.v]);
      if (a == b) return false;
      uf_parent_[a] = b;
    }
    return true;
  }
  // cographic: S u T independent iff G - T - S keeps the component count of G - T
  bool touches_forest = false;
  for (auto id : s)
    if (forest_[id]) {
      touches_forest = true;
      break;
    }
  if (!touches_forest) return true;
  ++epoch_;
  for (auto id : s) stamp_[id] = epoch_;
  UnionFind uf(ground_.vertex_count());
  for (const auto& e : ground_.edges()) {
    if (state_[e.id] == State::contracted || stamp_[e.id] == epoch_) continue;
    uf.unite(e.u, e.v);
  }
  return uf.sets() == base_components_;
}

bool OracleSession::query(const EdgeSet& s) {
  ledger_.count_query();
  validate(s);
  return answer(s);
}

std::vector<bool> OracleSession::query_batch(const std::vector<EdgeSet>& batch) {
  if (!ledger_.in_round()) throw RoundViolation("query batch issued outside a round");
  std::vector<bool> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(query(s));
  return out;
}

std::vector<bool> OracleSession::run_round(const std::string& label, const std::vector<EdgeSet>& batch) {
  begin_round(label);
  auto out = query_batch(batch);
  end_round();
  return out;
}

bool OracleSession::independent_unmetered(const EdgeSet& s) const {
  EdgeSet all = s;
  all.insert(all.end(), contracted_.begin(), contracted_.end());
  std::sort(all.begin(), all.end());
  return independent(ground_, kind_, all);
}

void OracleSession::contract(const EdgeSet& more) {
  validate(more);
  if (!independent_unmetered(more)) throw std::invalid_argument("contracted set must be independent in the minor");
  for (auto id : more) state_[id] = State::contracted;
  contracted_.insert(contracted_.end(), more.begin(), more.end());
  std::sort(contracted_.begin(), contracted_.end());
  rebuild_cache();
}

void OracleSession::delete_elements(const EdgeSet& more) {
  validate(more);
  for (auto id : more) state_[id] = State::deleted;
  deleted_.insert(deleted_.end(), more.begin(), more.end());
  std::sort(deleted_.begin(), deleted_.end());
}

std::size_t OracleSession::rank() const {
  // r(M/T \ D) = r_M(E \ D) - |T|
  EdgeSet kept;
  for (const auto& e : ground_.edges())
    if (state_[e.id] != State::deleted) kept.push_back(e.id);
  std::sort(kept.begin(), kept.end());
  return matroid_rank(ground_, kind_, kept) - contracted_.size();
}

namespace {

// Graph whose cycles (graphic) or bonds (cographic) are the circuits of the minor.
// Loops of the graphic minor are returned separately.
Contraction minor_graph(const Graph& ground, MatroidKind kind, const EdgeSet& contracted, const EdgeSet& deleted,
                        const EdgeSet& elements) {
  if (kind == MatroidKind::graphic) {
    EdgeSet keep = elements;
    keep.insert(keep.end(), contracted.begin(), contracted.end());
    std::sort(keep.begin(), keep.end());
    return contract(keep_edges(ground, keep), contracted);
  }
  // M*(G)/T \ D = M*((G \ T) / D)
  EdgeSet keep = elements;
  keep.insert(keep.end(), deleted.begin(), deleted.end());
  std::sort(keep.begin(), keep.end());
  return contract(keep_edges(ground, keep), deleted);
}

}  // namespace

std::size_t OracleSession::min_circuit_size() const {
  const Contraction c = minor_graph(ground_, kind_, contracted_, deleted_, elements());
  if (kind_ == MatroidKind::graphic) {
    if (!c.induced_loops.empty()) return 1;
    auto gth = girth(c.graph);
    return gth ? *gth : 0;
  }
  if (c.graph.edge_count() == 0) return 0;
  return min_cut_size(c.graph);
}

std::vector<EdgeSet> OracleSession::circuits_up_to(std::size_t max_size) const {
  const Contraction c = minor_graph(ground_, kind_, contracted_, deleted_, elements());
  std::vector<EdgeSet> out;
  if (kind_ == MatroidKind::graphic) {
    if (max_size >= 1)
      for (auto id : c.induced_loops) out.push_back({id});
    for (auto& cyc : enumerate_cycles(c.graph, max_size, {1000, 1000})) out.push_back(cyc.edges);
    return out;
  }
  const std::size_t comps = components(c.graph).count;
  for (auto& cut : enumerate_cuts(c.graph, max_size, {64, 1000}))
    if (component_count(c.graph, [&] {
          EdgeSet rest;
          for (const auto& e : c.graph.edges())
            if (!std::binary_search(cut.edges.begin(), cut.edges.end(), e.id)) rest.push_back(e.id);
          return rest;
        }()) == comps + 1)
      out.push_back(cut.edges);
  return out;
}

}  // namespace derand
