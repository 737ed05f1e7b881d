#include "derand/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "derand/samplespace.hpp"
#include "derand/spectral.hpp"

namespace derand {

namespace {

constexpr double kRel = 1e-9;

bool connected_subset(const Graph& g, const std::vector<std::size_t>& vertices) {
  return components(induced_subgraph(g, vertices)).count == 1;
}

ClusterPartition cluster_once(const Graph& g, double alpha) {
  const std::size_t n = g.vertex_count();
  ClusterPartition out;
  out.total_weight = g.total_weight();
  out.alpha = alpha;
  out.radius_bound = alpha * static_cast<double>(n) / out.total_weight;
  const double limit = out.radius_bound * (1 + kRel);
  out.part_of.assign(n, kNoEdge);

  std::size_t assigned = 0;
  while (assigned < n) {
    std::vector<std::size_t> rem;
    for (std::size_t v = 0; v < n; ++v)
      if (out.part_of[v] == kNoEdge) rem.push_back(v);
    const Graph sub = induced_subgraph(g, rem);
    const Components comps = components(sub);
    const Eigen::MatrixXd p = pseudoinverse(sub);
    const std::size_t root = 0;  // rem[0] is the smallest unassigned vertex

    std::vector<std::pair<double, std::size_t>> ball;
    for (std::size_t j = 0; j < rem.size(); ++j) {
      if (comps.label[j] != comps.label[root]) continue;
      const auto a = static_cast<Eigen::Index>(root), b = static_cast<Eigen::Index>(j);
      const double r = j == root ? 0.0 : p(a, a) + p(b, b) - 2 * p(a, b);
      if (r <= limit) ball.push_back({r, j});
    }
    std::sort(ball.begin(), ball.end());

    // crossing weight of every prefix, measured inside the remaining subgraph
    const auto adj = sub.adjacency();
    std::vector<bool> inside(rem.size(), false);
    std::vector<double> crossing(ball.size() + 1, 0.0);
    double cur = 0.0;
    for (std::size_t t = 0; t < ball.size(); ++t) {
      const std::size_t x = ball[t].second;
      for (auto [y, pos] : adj[x]) cur += inside[y] ? -sub.edge(pos).w : sub.edge(pos).w;
      inside[x] = true;
      crossing[t + 1] = cur;
    }
    std::vector<std::size_t> order(ball.size());
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (crossing[a] != crossing[b]) return crossing[a] < crossing[b];
      return a > b;
    });

    std::vector<std::size_t> chosen;
    for (auto t : order) {
      std::vector<std::size_t> prefix;
      for (std::size_t q = 0; q < t; ++q) prefix.push_back(ball[q].second);
      std::sort(prefix.begin(), prefix.end());
      if (t > 1) {
        if (!connected_subset(sub, prefix)) continue;
        if (resistance_diameter(sub, prefix) > limit) continue;
      }
      chosen = std::move(prefix);
      break;
    }
    // the singleton prefix always qualifies
    std::vector<std::size_t> part;
    for (auto j : chosen) part.push_back(rem[j]);
    for (auto v : part) out.part_of[v] = out.parts.size();
    assigned += part.size();
    out.parts.push_back(std::move(part));
  }

  for (const auto& e : g.edges())
    if (out.part_of[e.u] != out.part_of[e.v]) out.crossing_weight += e.w;
  for (const auto& part : out.parts) {
    const double d = resistance_diameter(g, part);
    out.part_rdiam.push_back(d);
    out.max_part_rdiam = std::max(out.max_part_rdiam, d);
  }
  return out;
}

double graded_diameter(const Graph& g, const std::vector<std::size_t>& vertices) {
  const Graph sub = induced_subgraph(g, vertices);
  double d = 0.0;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      d = std::max(d, static_cast<double>(schur_resistance(sub, a, b)));
  return d;
}

BigInt big_pow(std::size_t base, std::size_t e) {
  BigInt r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

ClusterPartition cluster_low_rdiam(const Graph& g, const ClusterOptions& opts) {
  if (g.vertex_count() == 0) throw std::invalid_argument("cluster_low_rdiam on an empty graph");
  if (components(g).count != 1) throw std::invalid_argument("cluster_low_rdiam needs a connected graph");
  if (g.edge_count() == 0) {
    ClusterPartition single;
    single.parts = {{0}};
    single.part_of = {0};
    single.part_rdiam = {0.0};
    single.alpha = opts.alpha;
    single.attempts = 1;
    return single;
  }
  double alpha = opts.alpha;
  std::size_t attempts = 0;
  while (alpha <= opts.alpha_cap) {
    ++attempts;
    ClusterPartition p = cluster_once(g, alpha);
    p.attempts = attempts;
    if (p.crossing_weight <= p.total_weight / 2 * (1 + kRel)) return p;
    alpha *= 2;
  }
  throw ClusteringFailed("clustering did not reach crossing weight <= w(E)/2 below alpha cap");
}

Rational WeightingResult::weight(std::size_t pos) const { return Rational(1, big_pow(delta, level.at(pos))); }

BigInt WeightingResult::weight_ratio() const { return levels == 0 ? BigInt(1) : big_pow(delta, levels - 1); }

bool WeightingResult::levels_ok(std::size_t m) const { return levels <= ceil_log2(std::max<std::size_t>(m, 1)) + 1; }

bool WeightingResult::halving_ok() const {
  return std::all_of(stats.begin(), stats.end(), [](const LevelStat& s) { return 2 * s.crossing <= s.edges; });
}

bool WeightingResult::monotone_ok() const {
  for (std::size_t i = 0; i + 1 < stats.size(); ++i)
    if (stats[i + 1].vertices > 1 && stats[i + 1].min_cut < stats[i].min_cut) return false;
  return true;
}

bool WeightingResult::diameters_ok() const {
  return std::all_of(diameter_checks.begin(), diameter_checks.end(), [](const DiameterCheck& d) { return d.pass; });
}

WeightingResult reweight_min_cut(const Graph& g, const ReweightOptions& opts) {
  const std::size_t n = g.vertex_count(), m = g.edge_count();
  if (n == 0) throw std::invalid_argument("reweight_min_cut on an empty graph");
  if (components(g).count != 1) throw std::invalid_argument("reweight_min_cut needs a connected graph");
  WeightingResult r;
  if (!g.unit_weights()) r.deviations.push_back("input weights ignored; clustering uses unit weights");
  r.delta = opts.delta ? opts.delta : std::max<std::size_t>(2, 2 * n * std::max(1u, ceil_log2(m)));
  r.level.assign(m, 0);
  if (m == 0) return r;
  r.min_cut = min_cut_size(g);

  Graph cur = with_unit_weights(g);
  std::vector<std::vector<std::size_t>> members(n);  // current vertex -> original vertices
  for (std::size_t v = 0; v < n; ++v) members[v] = {v};
  std::vector<std::vector<std::vector<std::size_t>>> level_parts;

  while (cur.vertex_count() > 1) {
    const std::size_t i = r.levels;
    const ClusterPartition cp = cluster_low_rdiam(cur, opts.cluster);
    LevelStat st;
    st.vertices = cur.vertex_count();
    st.edges = cur.edge_count();
    st.parts = cp.parts.size();
    st.min_cut = min_cut_size(cur);
    st.alpha_used = cp.alpha;
    st.alpha_achieved = cp.max_part_rdiam * static_cast<double>(st.edges) / static_cast<double>(st.vertices);
    EdgeSet intra;
    for (const auto& e : cur.edges()) {
      if (cp.part_of[e.u] == cp.part_of[e.v]) {
        intra.push_back(e.id);
        r.level[g.position(e.id)] = static_cast<unsigned>(i);
      } else {
        ++st.crossing;
      }
    }
    std::sort(intra.begin(), intra.end());
    r.stats.push_back(st);
    r.alpha_eff = std::max(r.alpha_eff, st.alpha_achieved);

    Contraction c = contract(cur, intra);
    std::vector<std::vector<std::size_t>> next(c.graph.vertex_count());
    for (std::size_t v = 0; v < cur.vertex_count(); ++v) {
      auto& dst = next[c.vertex_map[v]];
      dst.insert(dst.end(), members[v].begin(), members[v].end());
    }
    for (auto& s : next) std::sort(s.begin(), s.end());
    level_parts.push_back(next);
    members = std::move(next);
    cur = std::move(c.graph);
    ++r.levels;
  }

  const Graph weighted = apply_weights(g, r);
  const ResistanceTable table = leverage_scores_graded(weighted);
  for (const auto& row : table.rows) r.leverage.push_back(row.leverage);
  r.max_leverage = table.max_leverage();
  const double c = static_cast<double>(r.min_cut);
  const double growth = 1.0 + static_cast<double>(n) / static_cast<double>(r.delta);
  r.bound = 4 * r.alpha_eff / c;
  r.proven_bound = 2 * r.alpha_eff * std::pow(growth, static_cast<double>(r.levels - 1)) / c;
  if (std::pow(growth, static_cast<double>(r.levels - 1)) > 2)
    r.deviations.push_back("(1 + n/delta)^(levels-1) exceeds 2 for the chosen delta");

  if (n <= opts.diameter_check_max_n) {
    for (std::size_t i = 0; i < level_parts.size(); ++i) {
      const double bound = 2 * r.alpha_eff * std::pow(static_cast<double>(r.delta) * growth, static_cast<double>(i)) / c;
      for (std::size_t j = 0; j < level_parts[i].size(); ++j) {
        const auto& part = level_parts[i][j];
        if (part.size() < 2) continue;
        DiameterCheck d;
        d.level = i;
        d.part = j;
        d.vertices = part.size();
        d.rdiam = graded_diameter(weighted, part);
        d.bound = bound;
        d.pass = d.rdiam <= bound * (1 + 1e-6);
        r.diameter_checks.push_back(d);
      }
    }
  }
  return r;
}

Graph apply_weights(const Graph& g, const WeightingResult& r) {
  std::vector<Edge> edges = g.edges();
  for (std::size_t pos = 0; pos < edges.size(); ++pos)
    edges[pos].w = std::pow(static_cast<double>(r.delta), -static_cast<double>(r.level.at(pos)));
  return Graph::from_edges(g.vertex_count(), std::move(edges));
}

ConverseCheck verify_converse(const Graph& weighted, double c) {
  ConverseCheck out;
  const ResistanceTable table = leverage_scores_graded(weighted);
  out.max_leverage = table.max_leverage();
  out.c = c > 0 ? c : 1.0 / out.max_leverage;
  out.precondition = out.max_leverage <= (1.0 / out.c) * (1 + kRel);
  const MinCutResult mc = min_cut(with_unit_weights(weighted));
  out.min_cut = static_cast<std::size_t>(std::llround(mc.value));
  out.pass = static_cast<double>(out.min_cut) >= out.c * (1 - kRel);
  if (!out.pass) out.witness = mc.cut;
  return out;
}

double multi_terminal_energy(const Graph& g, const std::vector<std::size_t>& sources, const std::vector<double>& alpha,
                             const std::vector<std::size_t>& sinks, const std::vector<double>& beta) {
  if (sources.size() != alpha.size() || sinks.size() != beta.size())
    throw std::invalid_argument("terminal and current lists differ in length");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.vertex_count()));
  for (std::size_t i = 0; i < sources.size(); ++i) b(static_cast<Eigen::Index>(sources[i])) += alpha[i];
  for (std::size_t j = 0; j < sinks.size(); ++j) b(static_cast<Eigen::Index>(sinks[j])) -= beta[j];
  return flow_energy(g, electric_potentials(g, b));
}

ContractionBound contraction_diameter_bound(const Graph& g, const std::vector<std::vector<std::size_t>>& parts) {
  ContractionBound out;
  std::vector<std::size_t> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  out.rdiam = resistance_diameter(g, all);
  std::vector<std::size_t> part_of(g.vertex_count(), kNoEdge);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (auto v : parts[i]) part_of[v] = i;
    out.part_max = std::max(out.part_max, resistance_diameter(g, parts[i]));
  }
  if (std::count(part_of.begin(), part_of.end(), kNoEdge) != 0)
    throw std::invalid_argument("parts do not cover the vertex set");
  EdgeSet intra;
  for (const auto& e : g.edges())
    if (part_of[e.u] == part_of[e.v]) intra.push_back(e.id);
  std::sort(intra.begin(), intra.end());
  const Contraction c = contract(g, intra);
  std::vector<std::size_t> cv(c.graph.vertex_count());
  std::iota(cv.begin(), cv.end(), 0);
  out.contracted = resistance_diameter(c.graph, cv);
  out.parts = parts.size();
  return out;
}

nlohmann::json weighting_json(const WeightingResult& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& s : r.stats)
    levels.push_back({{"vertices", s.vertices},
                      {"edges", s.edges},
                      {"parts", s.parts},
                      {"crossing", s.crossing},
                      {"min_cut", s.min_cut},
                      {"alpha_used", s.alpha_used},
                      {"alpha_achieved", s.alpha_achieved}});
  std::size_t diam_pass = 0;
  for (const auto& d : r.diameter_checks) diam_pass += d.pass;
  return {{"delta", r.delta},
          {"levels", r.levels},
          {"alpha_eff", r.alpha_eff},
          {"max_leverage", r.max_leverage},
          {"c", r.min_cut},
          {"bound", r.bound},
          {"proven_bound", r.proven_bound},
          {"weight_ratio", r.weight_ratio().str()},
          {"level_stats", levels},
          {"diameter_checks", {{"tested", r.diameter_checks.size()}, {"passed", diam_pass}}},
          {"deviations", r.deviations}};
}

void write_weighting_csv(const Graph& g, const WeightingResult& r, std::ostream& out) {
  out << "edge,level,weight_num,weight_den,leverage\n";
  char buf[64];
  for (std::size_t pos = 0; pos < g.edge_count(); ++pos) {
    const Rational w = r.weight(pos);
    std::snprintf(buf, sizeof buf, "%.17g", pos < r.leverage.size() ? r.leverage[pos] : 0.0);
    out << (g.edge(pos).id + 1) << ',' << r.level[pos] << ',' << numerator(w) << ',' << denominator(w) << ',' << buf
        << '\n';
  }
}

}  // namespace derand
