// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.
// Usage: derand_acceptance [--report FILE] [--only N[,N...]]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/basisfind.hpp"
#include "derand/constants.hpp"
#include "derand/experiments.hpp"
#include "derand/generators.hpp"
#include "derand/graph.hpp"
#include "derand/matroid.hpp"
#include "derand/reweight.hpp"
#include "derand/samplespace.hpp"
#include "derand/spectral.hpp"

using namespace derand;
using nlohmann::json;

namespace {

// Pinned tolerances and limits.
constexpr double kLeverageSumTol = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr double kLemmaSlack = 1e-6;
constexpr double kExactRuntimeLimit = 60.0;      // seconds, criterion 1
constexpr double kAlmostRuntimeLimit = 300.0;    // seconds, criterion 2
constexpr double kReweightRuntimeLimit = 600.0;  // seconds, criterion 5
constexpr double kConnectivityTarget = 0.9;
// Rounds <= kRoundConstant * log2 m * log2 log2 m (both factors floored at 1); measured maximum is 2.0.
constexpr double kRoundConstant = 3.0;
constexpr std::size_t kRoundJitter = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
  json record = json::array();  // deterministic content only
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream o;
  o.precision(prec);
  o << x;
  return o.str();
}

Graph gen(const std::string& family, const std::string& params) {
  return gen_graph(family, FamilyParams::parse(params)).graph;
}

// Two triangles joined by two parallel edges.
Graph triangles_joined() {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  g.add_edge(5, 3);
  g.add_edge(0, 3);
  g.add_edge(0, 3);
  return g;
}

Graph petersen() {
  Graph g(10);
  for (std::size_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(i + 5, (i + 2) % 5 + 5);
  }
  return g;
}

// ---------------------------------------------------------------------------------------------------------------

Outcome exact_independence() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t spaces = 0;
  for (std::size_t n = 1; n <= 16; ++n) {
    for (std::size_t k = 1; k <= 4; ++k) {
      const SampleSpace s = build_kwise(n, k);
      const IndependenceReport r = verify_independence(s, std::min(k, n));
      ++spaces;
      if (r.max_tv != 0 || !r.exhaustive) {
        o.pass = false;
        o.detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " max_tv=" + to_string(r.max_tv);
        return o;
      }
      o.record.push_back({n, k, s.seed_bits(), r.subsets_tested});
    }
  }
  const double t = seconds_since(t0);
  o.pass = t < kExactRuntimeLimit;
  o.detail = std::to_string(spaces) + " spaces, max_tv 0 on every subset, " + fmt(t, 3) + "s";
  return o;
}

Outcome almost_independence() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t spaces = 0, seed_checked = 0;
  Rational worst_ratio = 0;
  for (std::size_t n = 1; n <= 32; ++n) {
    for (std::size_t k = 1; k <= 3 && k <= n; ++k) {
      for (const Rational& delta : {Rational(1, 8), Rational(1, 16)}) {
        const SampleSpace s = build_almost_kwise(n, k, delta);
        const IndependenceReport r = verify_independence(s, k);
        ++spaces;
        worst_ratio = std::max(worst_ratio, Rational(r.max_tv / delta));
        if (r.max_tv > delta || !r.exhaustive) {
          o.pass = false;
          o.detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " delta=" + to_string(delta) +
                     " max_tv=" + to_string(r.max_tv);
          return o;
        }
        // The support is nontrivial once n exceeds the construction's fixed overhead.
        if (n >= 20) {
          ++seed_checked;
          if (s.seed_bits() >= n) {
            o.pass = false;
            o.detail = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " seed_bits=" +
                       std::to_string(s.seed_bits());
            return o;
          }
        }
        o.record.push_back({n, k, to_string(delta), s.seed_bits(), to_string(r.max_tv)});
      }
    }
  }
  const double t = seconds_since(t0);
  o.pass = t < kAlmostRuntimeLimit;
  o.detail = std::to_string(spaces) + " spaces, max_tv/delta <= " + fmt(to_double(worst_ratio), 3) +
             ", seed_bits < n on " + std::to_string(seed_checked) + " spaces with n in [20,32], " + fmt(t, 3) + "s";
  return o;
}

Outcome marginal_transform() {
  Outcome o;
  std::size_t spaces = 0;
  for (Construction c : {Construction::polynomial, Construction::bch, Construction::full}) {
    for (unsigned L : {2u, 3u}) {
      for (std::size_t n : {3u, 4u, 5u}) {
        for (std::size_t k : {1u, 2u}) {
          const SampleSpace s = with_marginal(exact_builder(c), n, k, 0, L);
          std::vector<BigInt> ones(n, 0);
          BigInt total = 0;
          SpaceCursor cur = s.enumerate();
          while (cur.next()) {
            ++total;
            for (std::size_t i = 0; i < n; ++i)
              if (cur.vector().get(i)) ++ones[i];
          }
          const Rational want = pow2(-static_cast<long>(L));
          for (std::size_t i = 0; i < n; ++i) {
            if (Rational(ones[i], total) != want || s.marginal(i) != want) {
              o.pass = false;
              o.detail = construction_name(c) + " L=" + std::to_string(L) + " position " + std::to_string(i) +
                         " marginal " + to_string(Rational(ones[i], total));
              return o;
            }
          }
          const IndependenceReport r = verify_independence(s, k);
          if (r.max_tv != 0) {
            o.pass = false;
            o.detail = construction_name(c) + " L=" + std::to_string(L) + " not k-wise: max_tv " + to_string(r.max_tv);
            return o;
          }
          ++spaces;
        }
      }
    }
  }
  o.detail = std::to_string(spaces) + " spaces with exact marginals 2^-L (L=2,3) and product k-marginals";
  return o;
}

Outcome spectral_oracle() {
  Outcome o;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed * 7919);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(49));
    const double p = 0.05 + 0.3 * rng.unit();
    Graph g = gnp(n, p, seed);
    const ResistanceTable t = leverage_scores(g, false);
    double sum = 0;
    for (const auto& r : t.rows) sum += r.leverage;
    const double want = static_cast<double>(n - components(g).count);
    worst = std::max(worst, std::abs(sum - want));
  }
  if (worst > kLeverageSumTol) {
    o.pass = false;
    o.detail = "leverage sum off by " + fmt(worst);
    return o;
  }
  const double tri = effective_resistance(cycle_graph(3), 0, 1);
  const ResistanceTable k4 = leverage_scores(complete_graph(4), false);
  double k4_err = 0;
  for (const auto& r : k4.rows) k4_err = std::max(k4_err, std::abs(r.leverage - 0.5));
  Graph path(6);
  const double ws[] = {1.0, 2.0, 0.5, 4.0, 1.5};
  double series = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    path.add_edge(i, i + 1, ws[i]);
    series += 1.0 / ws[i];
  }
  const double path_r = effective_resistance(path, 0, 5);
  const double e1 = std::abs(tri - 2.0 / 3.0), e3 = std::abs(path_r - series);
  o.pass = e1 <= kClosedFormTol && k4_err <= kClosedFormTol && e3 <= kClosedFormTol;
  o.detail = "100 graphs, max |sum - (n - c)| = " + fmt(worst, 3) + "; triangle err " + fmt(e1, 3) + ", K4 err " +
             fmt(k4_err, 3) + ", path err " + fmt(e3, 3);
  return o;
}

std::vector<std::pair<std::string, std::string>> reweight_instances() {
  return {{"multi_cycle", "n=10,s=1"},        {"multi_cycle", "n=20,s=2"},        {"multi_cycle", "n=15,s=3"},
          {"multi_cycle", "n=12,s=4"},        {"multi_cycle", "n=8,s=5"},         {"multi_cycle", "n=6,s=6"},
          {"expander_like", "n=20,d=3,seed=1"}, {"expander_like", "n=30,d=4,seed=2"}, {"expander_like", "n=40,d=5,seed=3"},
          {"expander_like", "n=60,d=6,seed=4"}, {"expander_like", "n=24,d=7,seed=5"}, {"expander_like", "n=50,d=8,seed=6"},
          {"expander_like", "n=16,d=10,seed=7"}, {"expander_like", "n=26,d=12,seed=8"}, {"complete", "n=4"},
          {"complete", "n=7"},                {"complete", "n=10"},               {"complete", "n=13"},
          {"theta", "a=4,b=5,c=6"},           {"subdivided", "h=5,s=2"},          {"cycle", "n=60"},
          {"connected_gnp", "n=30,p=0.3,seed=11"}, {"connected_gnp", "n=45,p=0.25,seed=12"},
          {"connected_gnp", "n=60,p=0.2,seed=13"}, {"connected_gnp", "n=20,p=0.6,seed=14"}};
}

Outcome reweight_pipeline() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t count = 0;
  double worst_ratio = 0;
  for (const auto& [family, params] : reweight_instances()) {
    const Graph g = gen(family, params);
    const std::size_t c = min_cut_size(g);
    const std::string name = family + "(" + params + ")";
    if (c < 2 || c > 12 || g.vertex_count() > 60) {
      o.pass = false;
      o.detail = name + " outside the instance range (c=" + std::to_string(c) + ")";
      return o;
    }
    const WeightingResult w = reweight_min_cut(g);
    const ConverseCheck conv = verify_converse(apply_weights(g, w));
    const bool ok = w.leverage_ok() && w.levels_ok(g.edge_count()) && w.monotone_ok() && conv.pass;
    worst_ratio = std::max(worst_ratio, w.max_leverage / w.bound);
    o.record.push_back({{"graph", name},
                        {"c", c},
                        {"alpha_eff", w.alpha_eff},
                        {"levels", w.levels},
                        {"max_leverage", w.max_leverage},
                        {"bound", w.bound}});
    if (!ok) {
      o.pass = false;
      o.detail = name + ": leverage_ok=" + std::to_string(w.leverage_ok()) + " levels_ok=" +
                 std::to_string(w.levels_ok(g.edge_count())) + " monotone_ok=" + std::to_string(w.monotone_ok()) +
                 " converse=" + std::to_string(conv.pass);
      return o;
    }
    ++count;
  }
  const double t = seconds_since(t0);
  o.pass = t < kReweightRuntimeLimit;
  o.detail = std::to_string(count) + " graphs, max leverage / (4 alpha_eff / c) <= " + fmt(worst_ratio, 3) + ", " +
             fmt(t, 3) + "s";
  return o;
}

// Random partition of a connected graph into connected parts by simultaneous random growth.
std::vector<std::vector<std::size_t>> random_connected_parts(const Graph& g, std::size_t parts, Rng& rng) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> owner(n, kNoEdge);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  for (std::size_t i = 0; i < parts; ++i) owner[order[i]] = i;
  const auto adj = g.adjacency();
  std::size_t assigned = parts;
  while (assigned < n) {
    std::vector<std::pair<std::size_t, std::size_t>> frontier;
    for (std::size_t v = 0; v < n; ++v) {
      if (owner[v] != kNoEdge) continue;
      for (auto [u, e] : adj[v]) {
        (void)e;
        if (owner[u] != kNoEdge) frontier.push_back({v, owner[u]});
      }
    }
    const auto [v, part] = frontier[rng.below(frontier.size())];
    owner[v] = part;
    ++assigned;
  }
  std::vector<std::vector<std::size_t>> out(parts);
  for (std::size_t v = 0; v < n; ++v) out[owner[v]].push_back(v);
  return out;
}

Outcome resistance_lemmas() {
  Outcome o;
  double worst_energy = -1e300, worst_contract = -1e300;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed * 104729);
    const std::size_t n = 6 + static_cast<std::size_t>(rng.below(15));
    Graph base = connected_gnp(n, 0.15 + 0.3 * rng.unit(), seed);
    Graph g(n);
    for (const auto& e : base.edges()) g.add_edge(e.u, e.v, 0.25 + 2.0 * rng.unit());
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const double rdiam = resistance_diameter(g, all);

    // Disjoint random sources and sinks with random distributions.
    std::vector<std::size_t> perm = all;
    rng.shuffle(perm);
    const std::size_t a = 1 + static_cast<std::size_t>(rng.below(n / 2));
    const std::size_t b = 1 + static_cast<std::size_t>(rng.below(n - a));
    std::vector<std::size_t> src(perm.begin(), perm.begin() + static_cast<long>(a));
    std::vector<std::size_t> snk(perm.begin() + static_cast<long>(a), perm.begin() + static_cast<long>(a + b));
    auto dist = [&](std::size_t len) {
      std::vector<double> d(len);
      double s = 0;
      for (auto& x : d) s += (x = 0.05 + rng.unit());
      for (auto& x : d) x /= s;
      return d;
    };
    const double energy = multi_terminal_energy(g, src, dist(a), snk, dist(b));
    worst_energy = std::max(worst_energy, energy - rdiam);

    const std::size_t parts = 1 + static_cast<std::size_t>(rng.below(n / 2));
    const ContractionBound cb = contraction_diameter_bound(g, random_connected_parts(g, parts, rng));
    worst_contract = std::max(worst_contract, cb.rdiam - cb.contracted - static_cast<double>(cb.parts) * cb.part_max);
    o.record.push_back({{"n", n}, {"energy_gap", fmt(energy - rdiam, 6)}, {"parts", cb.parts}});
    if (energy > rdiam + kLemmaSlack || !cb.holds(kLemmaSlack)) {
      o.pass = false;
      o.detail = "instance " + std::to_string(seed) + ": energy " + fmt(energy) + " vs R_diam " + fmt(rdiam) +
                 ", R_diam " + fmt(cb.rdiam) + " vs R_1 + h R_0 = " +
                 fmt(cb.contracted + static_cast<double>(cb.parts) * cb.part_max);
      return o;
    }
  }
  o.detail = "25 instances; max energy - R_diam = " + fmt(worst_energy, 3) + ", max R_diam - (R_1 + h R_0) = " +
             fmt(worst_contract, 3);
  return o;
}

std::vector<std::pair<std::string, Graph>> structure_instances() {
  return {{"K4", complete_graph(4)},
          {"K5", complete_graph(5)},
          {"K6", complete_graph(6)},
          {"petersen", petersen()},
          {"multi_cycle(5,3)", multi_cycle(5, 3)},
          {"multi_cycle(6,2)", multi_cycle(6, 2)},
          {"theta(3,4,5)", theta_graph(3, 4, 5)},
          {"theta(5,5,6)", theta_graph(5, 5, 6)},
          {"cycle(9)", cycle_graph(9)},
          {"dumbbell(4)", dumbbell(4)},
          {"triangles_joined", triangles_joined()},
          {"subdivided(K4,2)", subdivided_complete(4, 2)},
          {"expander_like(10,3)", random_regular(10, 3, 1)},
          {"expander_like(12,4)", random_regular(12, 4, 2)},
          {"expander_like(14,3)", random_regular(14, 3, 3)},
          {"connected_gnp(12,0.4)", connected_gnp(12, 0.4, 5)},
          {"connected_gnp(14,0.25)", connected_gnp(14, 0.25, 6)}};
}

Outcome structure_claims() {
  Outcome o;
  std::size_t cuts = 0, cycles = 0, violations = 0;
  std::vector<std::string> notes;
  for (const auto& [name, g] : structure_instances()) {
    const std::size_t before = notes.size();
    violations += check_cut_structure(g, notes);
    violations += check_cycle_structure(g, notes);
    for (std::size_t i = before; i < notes.size(); ++i) notes[i] = name + ": " + notes[i];
    const std::size_t nc = window_cuts(g).size(), ny = window_cycles(g).size();
    cuts += nc;
    cycles += ny;
    o.record.push_back({name, nc, ny});
  }
  o.pass = violations == 0 && cuts > 0 && cycles > 0;
  o.detail = std::to_string(o.record.size()) + " instances, " + std::to_string(cuts) + " window bonds, " +
             std::to_string(cycles) + " window cycles, " + std::to_string(violations) + " violations";
  if (!notes.empty()) o.detail += "; first: " + notes.front();
  return o;
}

struct ConnCase {
  std::string name;
  Graph g;
  std::size_t k;
  unsigned L;
  bool complemented;
};

std::vector<ConnCase> connectivity_cases() {
  return {{"multi_cycle(4,6)", multi_cycle(4, 6), 8, 1, false},
          {"multi_cycle(5,5)", multi_cycle(5, 5), 8, 1, false},
          {"multi_cycle(6,4)", multi_cycle(6, 4), 6, 1, false},
          {"multi_cycle(3,8)", multi_cycle(3, 8), 8, 1, false},
          {"expander_like(12,8)", random_regular(12, 8, 1), 8, 1, false},
          {"expander_like(10,4)", random_regular(10, 4, 2), 4, 2, true},
          {"expander_like(8,6)", random_regular(8, 6, 3), 4, 2, true}};
}

Outcome connectivity() {
  Outcome o;
  std::ostringstream d;
  Rational worst = 1;
  for (const auto& c : connectivity_cases()) {
    const SampleSpace s = with_marginal(exact_builder(Construction::bch), c.g.edge_count(), c.k, 0, c.L, c.complemented);
    const ExperimentReport r = connectivity_experiment(c.g, s);
    const Rational bound = connectivity_union_bound(c.g, s);
    const bool ok = r.enumerated && to_double(r.rate()) >= kConnectivityTarget && r.rate() >= bound;
    worst = std::min(worst, r.rate());
    o.record.push_back({{"graph", c.name}, {"m", c.g.edge_count()}, {"report", r.to_json()}});
    if (!ok) {
      o.pass = false;
      d << c.name << " rate " << to_string(r.rate()) << " bound " << to_string(bound) << "; ";
    }
    if (c.g.edge_count() > 60) {
      o.pass = false;
      d << c.name << " exceeds m = 60; ";
    }
  }
  o.detail = d.str() + std::to_string(o.record.size()) + " instances, min success rate " +
             fmt(to_double(worst), 6) + " (target " + fmt(kConnectivityTarget) + "), every rate >= its union bound";
  if (!o.pass) o.detail = "FAILED: " + o.detail;
  return o;
}

Rational binom(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return Rational(r);
}

Outcome cyclefree() {
  Outcome o;
  const Constants c = Constants::desk();
  std::size_t instances = 0;
  for (const auto& [name, g] : std::vector<std::pair<std::string, Graph>>{
           {"subdivided(K4,4)", subdivided_complete(4, 4)},
           {"subdivided(K4,3)", subdivided_complete(4, 3)},
           {"subdivided(K5,2)", subdivided_complete(5, 2)},
           {"theta(5,6,7)", theta_graph(5, 6, 7)},
           {"petersen", petersen()},
           {"cycles(6:7:8)", disjoint_cycles({6, 7, 8})}}) {
    const std::size_t m = g.edge_count();
    const std::size_t gl = *girth(g);
    const SampleSpace s = girth_large_set_space(m, m, c);
    const ExperimentReport r = cyclefree_experiment(g, s);
    o.record.push_back({{"graph", name}, {"girth", gl}, {"report", r.to_json()}});
    if (gl < c.sweep_limit(MatroidKind::graphic, m) || !r.enumerated || r.success.hits == 0) {
      o.pass = false;
      o.detail = name + ": girth " + std::to_string(gl) + ", joint rate " + to_string(r.rate());
      return o;
    }
    ++instances;
  }
  // Single-cycle baselines: C_L under an L-wise space with marginal 2^-j.
  std::size_t baselines = 0;
  for (unsigned L = 3; L <= 9; ++L) {
    for (unsigned j : {1u, 2u}) {
      for (Construction con : {Construction::polynomial, Construction::bch, Construction::full}) {
        // Linear constructions at order L*j only where their seed fits; the full cube always runs.
        const std::size_t base = L * j;
        if (con == Construction::polynomial && kwise_seed_bits(base, base) > kDefaultBudgetBits) continue;
        if (con == Construction::bch && bch_seed_bits(base, base) > kDefaultBudgetBits) continue;
        const Graph g = cycle_graph(L);
        const SampleSpace s = with_marginal(exact_builder(con), L, L, 0, j);
        const ExperimentReport r = cyclefree_experiment(g, s);
        const Rational p = pow2(-static_cast<long>(j));
        Rational survive = 1;
        for (unsigned i = 0; i < L; ++i) survive *= p;
        Rational joint = 0;
        const unsigned lo = (L + 9) / 10;
        for (unsigned t = lo; t < L; ++t) {
          Rational term = binom(L, t);
          for (unsigned i = 0; i < t; ++i) term *= p;
          for (unsigned i = t; i < L; ++i) term *= 1 - p;
          joint += term;
        }
        const Rational acyclic = rational_from_json(r.extra["acyclic"]["rate"]);
        if (acyclic != 1 - survive || r.rate() != joint) {
          o.pass = false;
          o.detail = "C_" + std::to_string(L) + " " + construction_name(con) + " j=" + std::to_string(j) +
                     ": acyclic " + to_string(acyclic) + " vs " + to_string(1 - survive) + ", joint " +
                     to_string(r.rate()) + " vs " + to_string(joint);
          return o;
        }
        ++baselines;
      }
    }
  }
  o.detail = std::to_string(instances) + " girth instances with joint rate > 0; " + std::to_string(baselines) +
             " single-cycle baselines equal their closed forms";
  return o;
}

struct SurvivalCase {
  std::string name;
  Graph g;
  bool cuts;
  bool cycles;
};

// Cut-side instances have min cut >= 3 or a support that is the full cube; graphs with min cut 2 and long
// degree-2 paths need far more than k-wise control to isolate a 2-edge cut, so they are checked on cycles only.
std::vector<SurvivalCase> survival_instances() {
  return {{"K4", complete_graph(4), true, true},
          {"K5", complete_graph(5), true, true},
          {"single_edge", path_graph(2), true, false},
          {"bridge_path(3)", path_graph(3), true, false},
          {"dumbbell(3)", dumbbell(3), true, true},
          {"triangles_joined", triangles_joined(), true, true},
          {"cycles(3:3)", disjoint_cycles({3, 3}), true, true},
          {"theta(3,4,5)", theta_graph(3, 4, 5), false, true},
          {"subdivided(K4,2)", subdivided_complete(4, 2), false, true},
          {"cycle(7)", cycle_graph(7), false, true},
          {"multi_cycle(4,2)", multi_cycle(4, 2), true, true},
          {"multi_cycle(5,3)", multi_cycle(5, 3), true, true},
          {"multi_cycle(6,2)", multi_cycle(6, 2), true, true},
          {"petersen", petersen(), true, true},
          {"expander_like(10,3)", random_regular(10, 3, 1), true, true},
          {"expander_like(8,3)", random_regular(8, 3, 4), true, true},
          {"expander_like(10,4)", random_regular(10, 4, 2), true, false}};
}

Outcome unique_survival() {
  Outcome o;
  const Constants c = Constants::desk();
  std::size_t cuts = 0, cycles = 0, misses = 0, nontrivial = 0, cond_fail = 0;
  std::string first;
  for (const auto& [name, g, do_cuts, do_cycles] : survival_instances()) {
   try {
    const std::size_t m = g.edge_count();
    json inst = {{"graph", name}};
    const std::size_t ell = min_cut_size(g);
    const SampleSpace cs = cut_listing_space(m, ell, m, c);
    if (do_cuts && cs.seed_bits() < m) ++nontrivial;
    json cut_rates = json::array();
    for (const auto& cut : do_cuts ? window_cuts(g, c.window) : std::vector<EdgeSet>{}) {
      const ExperimentReport r = unique_cut_survival_experiment(g, cut, cs);
      ++cuts;
      cut_rates.push_back(r.success.hits.str());
      if (!r.enumerated || r.success.hits == 0) {
        ++misses;
        if (first.empty()) first = name + " cut of size " + std::to_string(cut.size());
      }
    }
    inst["cut_space"] = cs.descriptor();
    inst["cut_hits"] = cut_rates;
    if (const auto gl = girth(g); gl && do_cycles) {
      const SampleSpace ys = cycle_listing_space(m, *gl, m, c);
      if (ys.seed_bits() < m) ++nontrivial;
      json cyc_rates = json::array();
      for (const auto& cyc : window_cycles(g, c.window)) {
        const ExperimentReport r = unique_cycle_survival_experiment(g, cyc, ys);
        ++cycles;
        cyc_rates.push_back(r.success.hits.str());
        if (!r.enumerated || r.success.hits == 0) {
          ++misses;
          if (first.empty()) first = name + " cycle of length " + std::to_string(cyc.size());
        }
        if (r.extra["conditional"]["pass"] == false) ++cond_fail;
      }
      inst["cycle_space"] = ys.descriptor();
      inst["cycle_hits"] = cyc_rates;
    }
    o.record.push_back(inst);
   } catch (const SupportTooLarge& e) {
    ++misses;
    if (first.empty()) first = name + ": " + e.what();
   }
  }
  o.pass = misses == 0 && cond_fail == 0 && cuts > 0 && cycles > 0;
  o.detail = std::to_string(cuts) + " window cuts and " + std::to_string(cycles) + " window cycles over " +
             std::to_string(o.record.size()) + " instances, " + std::to_string(misses) + " misses, " +
             std::to_string(cond_fail) + " conditional-check failures, " + std::to_string(nontrivial) +
             " spaces smaller than 2^m";
  if (!first.empty()) o.detail += "; first miss: " + first;
  return o;
}

std::vector<std::pair<std::string, Graph>> basis_instances(std::size_t want, std::uint64_t salt) {
  std::vector<std::pair<std::string, Graph>> out;
  const std::vector<std::pair<std::string, std::string>> fixed = {
      {"complete", "n=6"},          {"complete", "n=9"},          {"cycle", "n=12"},
      {"theta", "a=3,b=4,c=5"},     {"multi_cycle", "n=6,s=3"},   {"multi_cycle", "n=8,s=6"},
      {"subdivided", "h=4,s=4"},    {"dumbbell", "h=4"},          {"cycles", "lens=3:4:5"},
      {"tree", "n=15,seed=2"},      {"path", "n=10"},             {"expander_like", "n=16,d=6,seed=3"},
      {"expander_like", "n=12,d=4,seed=4"}, {"expander_like", "n=20,d=3,seed=5"}, {"complete", "n=10"}};
  for (const auto& [f, p] : fixed) out.push_back({f + "(" + p + ")", gen(f, p)});
  Rng rng(salt);
  while (out.size() < want) {
    const std::uint64_t seed = rng.below(1u << 30);
    const std::size_t n = 4 + static_cast<std::size_t>(rng.below(14));
    const double p = 0.1 + 0.5 * rng.unit();
    const bool connected = rng.below(3) != 0;
    Graph g = connected ? connected_gnp(n, p, seed) : gnp(n, p, seed);
    if (g.edge_count() == 0 || g.edge_count() > 48) continue;
    out.push_back({std::string(connected ? "connected_gnp" : "gnp") + "(n=" + std::to_string(n) + ",p=" + fmt(p, 3) +
                       ",seed=" + std::to_string(seed) + ")",
                   std::move(g)});
  }
  return out;
}

struct BasisRun {
  BasisReport report;
  std::string ledger;
};

BasisRun run_basis(const Graph& g, MatroidKind kind) {
  OracleSession session(g, kind);
  BasisRun r{find_basis(session, Constants::desk()), ""};
  r.ledger = session.ledger().to_json().dump();
  return r;
}

Outcome end_to_end(MatroidKind kind, std::size_t count) {
  Outcome o;
  double worst = 0;
  std::size_t max_rounds = 0;
  for (const auto& [name, g] : basis_instances(count, kind == MatroidKind::graphic ? 11 : 12)) {
    const BasisRun a = run_basis(g, kind);
    const BasisRun b = run_basis(g, kind);
    const EdgeSet& basis = a.report.basis;
    const std::size_t comps = components(g).count;
    EdgeSet rest;
    {
      std::set<std::size_t> in(basis.begin(), basis.end());
      for (auto id : g.edge_ids())
        if (!in.count(id)) rest.push_back(id);
    }
    bool ok;
    if (kind == MatroidKind::graphic) {
      ok = is_forest(g, basis) && basis.size() == g.vertex_count() - comps && component_count(g, basis) == comps;
    } else {
      ok = basis.size() == g.edge_count() - g.vertex_count() + comps && component_count(g, rest) == comps;
    }
    const double scale = round_scale(g.edge_count());
    const double ratio = static_cast<double>(a.report.rounds) / scale;
    worst = std::max(worst, ratio);
    max_rounds = std::max(max_rounds, a.report.rounds);
    const bool bounded = static_cast<double>(a.report.rounds) <= kRoundConstant * scale;
    const std::size_t jitter = a.report.rounds > b.report.rounds ? a.report.rounds - b.report.rounds
                                                                 : b.report.rounds - a.report.rounds;
    const bool stable = jitter <= kRoundJitter && a.ledger == b.ledger && a.report.basis == b.report.basis;
    o.record.push_back({{"graph", name},
                        {"m", g.edge_count()},
                        {"rounds", a.report.rounds},
                        {"queries", a.report.total_queries},
                        {"ledger", a.ledger}});
    if (!(ok && a.report.certified && !a.report.sampled && bounded && stable)) {
      o.pass = false;
      o.detail = name + ": basis_ok=" + std::to_string(ok) + " certified=" + std::to_string(a.report.certified) +
                 " rounds=" + std::to_string(a.report.rounds) + " (limit " + fmt(kRoundConstant * scale) +
                 ") stable=" + std::to_string(stable);
      return o;
    }
  }
  o.detail = std::to_string(o.record.size()) + " graphs certified; max rounds " + std::to_string(max_rounds) +
             ", measured C_r = " + fmt(worst, 4) + " <= pinned " + fmt(kRoundConstant) +
             "; ledgers identical across reruns";
  return o;
}

std::vector<std::pair<std::string, Graph>> axiom_instances() {
  std::vector<std::pair<std::string, Graph>> out = {
      {"K4", complete_graph(4)},          {"cycle(5)", cycle_graph(5)},        {"theta(2,2,3)", theta_graph(2, 2, 3)},
      {"multi_cycle(3,2)", multi_cycle(3, 2)}, {"multi_cycle(4,2)", multi_cycle(4, 2)},
      {"path(6)", path_graph(6)},         {"dumbbell(3)", dumbbell(3)},        {"cycles(3:4)", disjoint_cycles({3, 4})},
      {"triangles_joined", triangles_joined()}, {"subdivided(K3,2)", subdivided_complete(3, 2)}};
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Graph g = gnp(6, 0.4, seed);
    if (g.edge_count() <= 8) out.push_back({"gnp(6,0.4," + std::to_string(seed) + ")", std::move(g)});
  }
  Graph loops(3);
  loops.add_edge(0, 1);
  loops.add_edge(1, 1);
  loops.add_edge(1, 2);
  loops.add_edge(1, 2);
  out.push_back({"loop_and_parallel", std::move(loops)});
  return out;
}

Outcome matroid_axioms() {
  Outcome o;
  std::size_t violations = 0, pairs = 0;
  std::string first;
  for (const auto& [name, g] : axiom_instances()) {
    const std::size_t m = g.edge_count();
    if (m > 8) {
      o.pass = false;
      o.detail = name + " has more than 8 edges";
      return o;
    }
    const EdgeSet ids = g.edge_ids();
    auto subset = [&](unsigned mask) {
      EdgeSet s;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1u) s.push_back(ids[i]);
      return s;
    };
    for (MatroidKind kind : {MatroidKind::graphic, MatroidKind::cographic}) {
      const unsigned full = 1u << m;
      std::vector<bool> ind(full);
      for (unsigned mask = 0; mask < full; ++mask) ind[mask] = independent(g, kind, subset(mask));
      auto bad = [&](const std::string& what) {
        ++violations;
        if (first.empty()) first = name + " " + kind_name(kind) + ": " + what;
      };
      if (!ind[0]) bad("empty set dependent");
      for (unsigned a = 0; a < full; ++a) {
        if (!ind[a]) continue;
        for (std::size_t i = 0; i < m; ++i)
          if ((a >> i & 1u) && !ind[a & ~(1u << i)]) bad("downward closure");
        for (unsigned b = 0; b < full; ++b) {
          if (!ind[b] || std::popcount(b) <= std::popcount(a)) continue;
          ++pairs;
          bool exchange = false;
          for (std::size_t i = 0; i < m && !exchange; ++i)
            if ((b >> i & 1u) && !(a >> i & 1u) && ind[a | (1u << i)]) exchange = true;
          if (!exchange) bad("exchange");
        }
      }
    }
    o.record.push_back(name);
  }
  o.pass = violations == 0;
  o.detail = std::to_string(o.record.size()) + " graphs, both kinds, " + std::to_string(pairs) + " exchange pairs, " +
             std::to_string(violations) + " violations";
  if (!first.empty()) o.detail += "; first: " + first;
  return o;
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::vector<Criterion> criteria() {
  return {{1, "exact k-wise independence", exact_independence},
          {2, "almost k-wise independence", almost_independence},
          {3, "dyadic marginal transform", marginal_transform},
          {4, "spectral oracle", spectral_oracle},
          {5, "min-cut reweighting", reweight_pipeline},
          {6, "energy and contraction-diameter bounds", resistance_lemmas},
          {7, "window cut/cycle structure", structure_claims},
          {8, "connectivity under k-wise sampling", connectivity},
          {9, "cycle-freeness", cyclefree},
          {10, "unique survival", unique_survival},
          {11, "graphic basis end to end", [] { return end_to_end(MatroidKind::graphic, 50); }},
          {12, "cographic basis end to end", [] { return end_to_end(MatroidKind::cographic, 30); }},
          {13, "matroid axioms", matroid_axioms}};
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_path;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: derand_acceptance [--report FILE] [--only N[,N...]]\n";
      return 2;
    }
  }
  auto selected = [&](int id) { return only.empty() || only.count(id); };

  bool all = true;
  json report = json::object();
  std::vector<std::string> first_records;
  for (const auto& c : criteria()) {
    if (!selected(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("criterion %2d %-40s %s  %s\n", c.id, c.name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    report[std::to_string(c.id)] = {{"pass", o.pass}, {"record", o.record}};
    first_records.push_back(o.record.dump());
  }

  if (selected(14)) {
    // Second execution of every deterministic record; byte equality required.
    Outcome o;
    std::size_t compared = 0, differing = 0;
    std::size_t idx = 0;
    for (const auto& c : criteria()) {
      if (!selected(c.id)) continue;
      const std::string before = first_records[idx++];
      std::string after;
      try {
        after = c.run().record.dump();
      } catch (const std::exception& e) {
        after = std::string("exception: ") + e.what();
      }
      ++compared;
      if (after != before) ++differing;
    }
    o.pass = differing == 0 && compared > 0;
    o.detail = std::to_string(compared) + " criterion records regenerated, " + std::to_string(differing) +
               " differ byte-wise";
    all = all && o.pass;
    std::printf("criterion %2d %-40s %s  %s\n", 14, "determinism", o.pass ? "PASS" : "FAIL", o.detail.c_str());
    report["14"] = {{"pass", o.pass}};
  }

  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report.dump(2) << "\n";
  }
  return all ? 0 : 1;
}
