#include <doctest.h>

#include <numeric>
#include <sstream>

#include "derand/generators.hpp"
#include "derand/reweight.hpp"
#include "derand/spectral.hpp"

using namespace derand;

namespace {

std::vector<Graph> instances() {
  std::vector<Graph> out = {cycle_graph(7), complete_graph(6), multi_cycle(5, 3), theta_graph(2, 3, 4),
                            dumbbell(4), subdivided_complete(4, 2), random_regular(12, 3, 5), path_graph(4)};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) out.push_back(connected_gnp(10 + seed, 0.3, seed));
  return out;
}

}  // namespace

TEST_CASE("clusters partition the vertices into connected low-diameter parts") {
  for (const Graph& g : instances()) {
    const ClusterPartition p = cluster_low_rdiam(g);
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
      CHECK(std::is_sorted(p.parts[i].begin(), p.parts[i].end()));
      CHECK(components(induced_subgraph(g, p.parts[i])).count == 1);
      CHECK(p.part_rdiam[i] <= p.radius_bound * (1 + 1e-9));
      for (auto v : p.parts[i]) {
        CHECK(p.part_of[v] == i);
        seen.push_back(v);
      }
    }
    std::sort(seen.begin(), seen.end());
    std::vector<std::size_t> all(g.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    CHECK(seen == all);
    double crossing = 0;
    for (const auto& e : g.edges())
      if (p.part_of[e.u] != p.part_of[e.v]) crossing += e.w;
    CHECK(crossing == doctest::Approx(p.crossing_weight));
    CHECK(2 * p.crossing_weight <= p.total_weight * (1 + 1e-9));
    CHECK(p.radius_bound == doctest::Approx(p.alpha * static_cast<double>(g.vertex_count()) / p.total_weight));
  }
}

TEST_CASE("clustering doubles alpha until it succeeds or hits the cap") {
  ClusterOptions small;
  small.alpha = 1.0 / 64;
  const ClusterPartition p = cluster_low_rdiam(cycle_graph(9), small);
  CHECK(p.attempts > 1);
  CHECK(p.alpha == doctest::Approx(small.alpha * std::pow(2.0, static_cast<double>(p.attempts - 1))));
  ClusterOptions capped;
  capped.alpha = 1.0 / 64;
  capped.alpha_cap = 1.0 / 32;
  CHECK_THROWS_AS(cluster_low_rdiam(cycle_graph(9), capped), ClusteringFailed);
  CHECK_THROWS(cluster_low_rdiam(disjoint_cycles({3, 3})));
}

TEST_CASE("reweighting invariants") {
  for (const Graph& g : instances()) {
    const WeightingResult r = reweight_min_cut(g);
    const std::size_t n = g.vertex_count(), m = g.edge_count();
    unsigned lg = 0;
    while ((std::size_t{1} << lg) < m) ++lg;
    CHECK(r.delta == 2 * n * std::max(1u, lg));
    CHECK(r.min_cut == min_cut_size(g));
    CHECK(r.levels_ok(m));
    CHECK(r.halving_ok());
    CHECK(r.monotone_ok());
    CHECK(r.leverage_ok());
    CHECK(r.diameters_ok());
    CHECK(r.max_leverage <= r.proven_bound * (1 + 1e-9));
    CHECK(r.weight_ratio() == BigInt(boost::multiprecision::pow(BigInt(r.delta), static_cast<unsigned>(r.levels - 1))));
    REQUIRE(r.level.size() == m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      CHECK(r.level[pos] < r.levels);
      const BigInt scale = boost::multiprecision::pow(BigInt(r.delta), r.level[pos]);
      CHECK(r.weight(pos) * Rational(scale) == 1);
    }
    // Leverages recomputed through the pseudoinverse; their sum is the rank n - 1.
    const ResistanceTable t = leverage_scores(apply_weights(g, r), false);
    double sum = 0;
    for (std::size_t pos = 0; pos < m; ++pos) {
      CHECK(r.leverage[pos] == doctest::Approx(t.rows[pos].leverage).epsilon(1e-6));
      sum += r.leverage[pos];
    }
    CHECK(sum == doctest::Approx(static_cast<double>(n - 1)).epsilon(1e-6));
    std::size_t edges_in_stats = 0;
    for (const auto& s : r.stats) edges_in_stats += s.edges - s.crossing;
    CHECK(edges_in_stats == m);
  }
}

TEST_CASE("a fixed delta is used as given") {
  ReweightOptions o;
  o.delta = 3;
  const WeightingResult r = reweight_min_cut(multi_cycle(6, 2), o);
  CHECK(r.delta == 3);
  CHECK_FALSE(r.deviations.empty());
}

TEST_CASE("reweighting preconditions") {
  CHECK_THROWS(reweight_min_cut(Graph()));
  CHECK_THROWS(reweight_min_cut(disjoint_cycles({3, 4})));
  const WeightingResult single = reweight_min_cut(Graph(1));
  CHECK(single.levels == 0);
  Graph w = cycle_graph(5);
  std::vector<Edge> es = w.edges();
  es[0].w = 2;
  const WeightingResult r = reweight_min_cut(Graph::from_edges(5, es));
  CHECK(r.deviations.front().find("ignored") != std::string::npos);
}

TEST_CASE("converse: small leverage everywhere forces a large min cut") {
  // Every cut meets each spanning tree, so leverages across a cut sum to at least 1.
  Rng rng(11);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Graph g = connected_gnp(9, 0.4, seed);
    std::vector<Edge> es = g.edges();
    for (auto& e : es) e.w = std::pow(2.0, -static_cast<double>(rng.below(12)));
    const ConverseCheck c = verify_converse(Graph::from_edges(9, es));
    CHECK(c.precondition);
    CHECK(c.pass);
    CHECK(static_cast<double>(c.min_cut) * c.max_leverage >= 1 - 1e-9);
  }
}

TEST_CASE("converse reports a witness when c is too large") {
  const ConverseCheck c = verify_converse(path_graph(4), 2.0);
  CHECK_FALSE(c.precondition);
  CHECK_FALSE(c.pass);
  CHECK(c.min_cut == 1);
  CHECK(c.witness.edges.size() == 1);
  const ConverseCheck k = verify_converse(complete_graph(6));
  CHECK(k.c == doctest::Approx(3.0));
  CHECK(k.pass);
}

TEST_CASE("multi-terminal energy") {
  const Graph p = path_graph(3);
  // One unit enters at 0; half leaves at 1 and half at 2.
  CHECK(multi_terminal_energy(p, {0}, {1.0}, {1, 2}, {0.5, 0.5}) == doctest::Approx(1.25));
  CHECK(multi_terminal_energy(p, {0}, {1.0}, {2}, {1.0}) == doctest::Approx(2.0));
  const Graph k = complete_graph(5);
  CHECK(multi_terminal_energy(k, {0}, {1.0}, {3}, {1.0}) == doctest::Approx(effective_resistance(k, 0, 3)));
  CHECK_THROWS(multi_terminal_energy(p, {0}, {1.0, 0.0}, {2}, {1.0}));
}

TEST_CASE("contraction diameter bound") {
  for (const Graph& g : instances()) {
    const ClusterPartition p = cluster_low_rdiam(g);
    const ContractionBound b = contraction_diameter_bound(g, p.parts);
    CHECK(b.parts == p.parts.size());
    CHECK(b.holds(1e-9));
    CHECK(b.part_max == doctest::Approx(p.max_part_rdiam));
  }
  CHECK_THROWS(contraction_diameter_bound(cycle_graph(5), {{0, 1}, {2, 3}}));
}

TEST_CASE("weighting report formats") {
  const Graph g = multi_cycle(4, 2);
  const WeightingResult r = reweight_min_cut(g);
  const nlohmann::json j = weighting_json(r);
  CHECK(j.at("delta") == r.delta);
  CHECK(j.at("weight_ratio") == r.weight_ratio().str());
  std::ostringstream csv;
  write_weighting_csv(g, r, csv);
  std::string line;
  std::istringstream in(csv.str());
  std::size_t lines = 0;
  std::getline(in, line);
  CHECK(line == "edge,level,weight_num,weight_den,leverage");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == g.edge_count());
}
