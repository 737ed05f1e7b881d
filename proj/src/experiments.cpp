#include "derand/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "derand/reweight.hpp"
#include "derand/spectral.hpp"

namespace derand {

namespace {

struct Visit {
  bool sampled = false;
  std::uint64_t seed = 0;
};

// f(vector, seed) for every support point, or for a pseudorandom sample when over budget and allowed.
template <class F>
Visit visit(const SampleSpace& space, const ExperimentOptions& opts, F&& f) {
  Visit out;
  if (space.seed_bits() <= opts.budget_bits) {
    SpaceCursor cur = space.enumerate(opts.budget_bits);
    while (cur.next()) f(cur.vector(), cur.seed());
    return out;
  }
  if (!opts.sample) throw SupportTooLarge(space.seed_bits(), opts.budget_bits);
  out.sampled = true;
  out.seed = opts.sample_seed;
  for (auto s : sample_seeds(space, *opts.sample, opts.sample_seed)) f(space.generate(s), s);
  return out;
}

void check_size(const Graph& g, const SampleSpace& space) {
  if (space.size() != g.edge_count())
    throw std::invalid_argument("sample space has " + std::to_string(space.size()) + " positions but the graph has " +
                                std::to_string(g.edge_count()) + " edges");
}

std::vector<std::size_t> positions_of(const Graph& g, const EdgeSet& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(g.position(id));
  return out;
}

nlohmann::json ids_json(const Graph& g, const BitVec& v, bool value) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if (v.get(i) == value) j.push_back(g.edge(i).id + 1);
  return j;
}

nlohmann::json external(const EdgeSet& ids) {
  nlohmann::json j = nlohmann::json::array();
  for (auto id : ids) j.push_back(id + 1);
  return j;
}

std::size_t kept_components(const Graph& g, const BitVec& v, bool value, UnionFind& uf) {
  uf.reset(g.vertex_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if (v.get(i) == value) uf.unite(g.edge(i).u, g.edge(i).v);
  return uf.sets();
}

nlohmann::json rate_json(const RateCount& r) {
  return {{"hits", r.hits.str()}, {"total", r.total.str()}, {"rate", rational_json(r.rate())},
          {"rate_float", to_double(r.rate())}};
}

std::size_t window_top(std::size_t ell, double window) {
  return static_cast<std::size_t>(std::ceil(window * static_cast<double>(ell) - 1e-12));
}

ExperimentReport start(const std::string& name, const Graph& g, const SampleSpace& space) {
  ExperimentReport r;
  r.experiment = name;
  r.spec = {{"n", g.vertex_count()}, {"m", g.edge_count()}, {"space", space.descriptor()},
            {"seed_bits", space.seed_bits()}};
  return r;
}

void finish(ExperimentReport& r, const Visit& v) {
  r.enumerated = !v.sampled;
  r.sample_seed = v.seed;
  if (v.sampled) r.deviations.push_back("support over budget: rates estimated from a pseudorandom sample");
}

std::vector<unsigned> dyadic_exponents(const std::vector<double>& p) {
  std::vector<unsigned> out;
  out.reserve(p.size());
  for (double x : p) {
    if (!(x > 0)) throw std::invalid_argument("marginal must be positive");
    unsigned L = 0;
    while (L < 62 && std::ldexp(1.0, -static_cast<int>(L)) > x) ++L;
    out.push_back(L);
  }
  return out;
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j = {{"experiment", experiment},
                      {"spec", spec},
                      {"success", rate_json(success)},
                      {"mode", enumerated ? "enumeration" : "NON-DERANDOMIZED"},
                      {"failure_witnesses", witnesses},
                      {"deviations", deviations},
                      {"extra", extra}};
  if (!enumerated) j["sample_seed"] = sample_seed;
  return j;
}

ExperimentReport connectivity_experiment(const Graph& g, const SampleSpace& space, const ExperimentOptions& opts) {
  check_size(g, space);
  ExperimentReport r = start("connectivity", g, space);
  const std::size_t base = components(g).count;
  UnionFind uf;
  BigInt kept_total = 0;
  const Visit v = visit(space, opts, [&](const BitVec& x, std::uint64_t seed) {
    ++r.success.total;
    kept_total += x.count();
    if (kept_components(g, x, true, uf) == base) {
      ++r.success.hits;
    } else if (r.witnesses.size() < kWitnessCap) {
      r.witnesses.push_back({{"seed", seed}, {"dropped", ids_json(g, x, false)}});
    }
  });
  finish(r, v);
  r.extra["mean_kept"] = rational_json(r.success.total == 0 ? Rational(0) : Rational(kept_total, r.success.total));
  if (!v.sampled) r.extra["union_bound"] = rational_json(connectivity_union_bound(g, space));
  return r;
}

Rational connectivity_union_bound(const Graph& g, const SampleSpace& space) {
  check_size(g, space);
  const std::size_t ell = g.edge_count() ? min_cut_size(g) : 0;
  const std::size_t k = space.params().k;
  const Rational delta = space.params().delta;
  std::vector<Rational> drop(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) drop[i] = 1 - space.marginal(i);
  Rational sum = 0;
  // Every bond has at least ell edges; all of them are enumerated.
  const std::size_t base = components(g).count;
  for (const auto& cut : enumerate_cuts(g, g.edge_count())) {
    if (cut.edges.empty() || cut.edges.size() < ell) continue;
    if (components(delete_edges(g, cut.edges)).count != base + 1) continue;
    std::vector<Rational> q;
    for (auto pos : positions_of(g, cut.edges)) q.push_back(drop[pos]);
    std::sort(q.begin(), q.end());
    Rational term = 1;
    for (std::size_t i = 0; i < std::min(q.size(), k); ++i) term *= q[i];
    sum += term + delta;
  }
  return 1 - sum;
}

ExperimentReport cyclefree_experiment(const Graph& g, const SampleSpace& space, const ExperimentOptions& opts) {
  check_size(g, space);
  ExperimentReport r = start("cyclefree", g, space);
  RateCount acyclic, large;
  UnionFind uf;
  const std::size_t m = g.edge_count();
  const Visit v = visit(space, opts, [&](const BitVec& x, std::uint64_t seed) {
    ++r.success.total;
    ++acyclic.total;
    ++large.total;
    uf.reset(g.vertex_count());
    bool forest = true;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!x.get(i)) continue;
      ++count;
      if (!uf.unite(g.edge(i).u, g.edge(i).v)) forest = false;
    }
    const bool big = 10 * count >= m;
    if (forest) ++acyclic.hits;
    if (big) ++large.hits;
    if (forest && big) {
      ++r.success.hits;
    } else if (r.witnesses.size() < kWitnessCap) {
      r.witnesses.push_back({{"seed", seed}, {"kept", ids_json(g, x, true)}, {"acyclic", forest}, {"size", count}});
    }
  });
  finish(r, v);
  r.extra["acyclic"] = rate_json(acyclic);
  r.extra["size"] = rate_json(large);
  return r;
}

bool is_bond(const Graph& g, const EdgeSet& s) {
  if (s.empty()) return false;
  std::set<std::size_t> uniq(s.begin(), s.end());
  if (uniq.size() != s.size()) return false;
  for (auto id : s)
    if (!g.has_id(id)) return false;
  const Graph rest = delete_edges(g, s);
  const Components c = components(rest);
  if (c.count != components(g).count + 1) return false;
  for (auto id : s) {
    const Edge& e = g.edge_by_id(id);
    if (c.label[e.u] == c.label[e.v]) return false;
  }
  return true;
}

bool is_cycle(const Graph& g, const EdgeSet& s) {
  if (s.empty()) return false;
  std::set<std::size_t> uniq(s.begin(), s.end());
  if (uniq.size() != s.size()) return false;
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  for (auto id : s) {
    if (!g.has_id(id)) return false;
    const Edge& e = g.edge_by_id(id);
    if (e.u == e.v) return s.size() == 1;
    ++deg[e.u];
    ++deg[e.v];
  }
  for (auto d : deg)
    if (d != 0 && d != 2) return false;
  return component_count(g, s) + s.size() == g.vertex_count() + 1;
}

std::vector<EdgeSet> window_cuts(const Graph& g, double window) {
  std::vector<EdgeSet> out;
  if (g.edge_count() == 0) return out;
  const std::size_t ell = min_cut_size(g);
  const std::size_t top = window_top(ell, window);
  std::set<EdgeSet> seen;
  for (auto& cut : enumerate_cuts(g, top)) {
    EdgeSet s = cut.edges;
    std::sort(s.begin(), s.end());
    if (s.size() < ell || !is_bond(g, s)) continue;
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<EdgeSet> window_cycles(const Graph& g, double window) {
  std::vector<EdgeSet> out;
  const auto gl = girth(g);
  if (!gl) return out;
  const std::size_t top = window_top(*gl, window);
  std::set<EdgeSet> seen;
  for (auto& c : enumerate_cycles(g, top)) {
    EdgeSet s = c.edges;
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

ExperimentReport unique_cut_survival_experiment(const Graph& g, const EdgeSet& cut, const SampleSpace& space,
                                                const ExperimentOptions& opts) {
  check_size(g, space);
  if (!is_bond(g, cut)) throw std::invalid_argument("target is not a bond of the graph");
  const std::size_t ell = min_cut_size(g);
  ExperimentReport r = start("unique-cut", g, space);
  r.spec["target"] = external(cut);
  r.spec["min_cut"] = ell;
  const std::size_t base = components(g).count;
  const auto target = positions_of(g, cut);
  RateCount kept;
  UnionFind uf;
  nlohmann::json isolating = nlohmann::json::array();
  const Visit v = visit(space, opts, [&](const BitVec& x, std::uint64_t seed) {
    ++r.success.total;
    ++kept.total;
    for (auto p : target)
      if (!x.get(p)) return;
    ++kept.hits;
    // The kept set is a union of cuts; it holds exactly one bond iff removing it adds exactly one component.
    if (kept_components(g, x, false, uf) == base + 1) {
      ++r.success.hits;
      if (isolating.size() < kWitnessCap) isolating.push_back(seed);
    } else if (r.witnesses.size() < kWitnessCap) {
      r.witnesses.push_back({{"seed", seed}, {"kept", ids_json(g, x, true)}});
    }
  });
  finish(r, v);
  r.extra["target_kept"] = rate_json(kept);
  r.extra["isolating_seeds"] = isolating;
  return r;
}

ExperimentReport unique_cycle_survival_experiment(const Graph& g, const EdgeSet& cycle, const SampleSpace& space,
                                                  const ExperimentOptions& opts) {
  check_size(g, space);
  if (!is_cycle(g, cycle)) throw std::invalid_argument("target is not a cycle of the graph");
  ExperimentReport r = start("unique-cycle", g, space);
  r.spec["target"] = external(cycle);
  const auto target = positions_of(g, cycle);
  const std::size_t n = g.vertex_count();
  const std::size_t k = space.params().k;

  // Events A = "every edge of T kept" for T outside the cycle with |C| + |T| <= k, capped.
  constexpr std::size_t kEventCap = 256;
  std::vector<std::vector<std::size_t>> events;
  std::vector<bool> in_target(g.edge_count(), false);
  for (auto p : target) in_target[p] = true;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if (!in_target[i]) others.push_back(i);
  const std::size_t t_max = k > target.size() ? std::min<std::size_t>(k - target.size(), 2) : 0;
  for (std::size_t a = 0; a < others.size() && t_max >= 1 && events.size() < kEventCap; ++a)
    events.push_back({others[a]});
  for (std::size_t a = 0; a < others.size() && t_max >= 2 && events.size() < kEventCap; ++a)
    for (std::size_t b = a + 1; b < others.size() && events.size() < kEventCap; ++b)
      events.push_back({others[a], others[b]});
  std::vector<BigInt> event_hits(events.size(), 0);

  RateCount kept;
  UnionFind uf;
  nlohmann::json isolating = nlohmann::json::array();
  const Visit v = visit(space, opts, [&](const BitVec& x, std::uint64_t seed) {
    ++r.success.total;
    ++kept.total;
    for (auto p : target)
      if (!x.get(p)) return;
    ++kept.hits;
    for (std::size_t e = 0; e < events.size(); ++e) {
      bool all = true;
      for (auto p : events[e]) all = all && x.get(p);
      if (all) ++event_hits[e];
    }
    const std::size_t count = x.count();
    // Cyclomatic number 1: the kept set contains exactly one cycle.
    if (count + kept_components(g, x, true, uf) == n + 1) {
      ++r.success.hits;
      if (isolating.size() < kWitnessCap) isolating.push_back(seed);
    } else if (r.witnesses.size() < kWitnessCap) {
      r.witnesses.push_back({{"seed", seed}, {"kept", ids_json(g, x, true)}});
    }
  });
  finish(r, v);
  r.extra["target_kept"] = rate_json(kept);
  r.extra["isolating_seeds"] = isolating;

  nlohmann::json cond = {{"events", events.size()}, {"max_gap", 0.0}, {"pass", true}};
  if (kept.hits == 0) {
    cond["pass"] = nullptr;
    cond["note"] = "target never kept";
  } else {
    const Rational pc(kept.hits, kept.total);
    const Rational bound = 2 * space.params().delta / pc;
    Rational worst = 0;
    std::size_t worst_event = 0;
    for (std::size_t e = 0; e < events.size(); ++e) {
      Rational pu = 1;
      for (auto p : events[e]) pu *= space.marginal(p);
      Rational gap = Rational(event_hits[e], kept.hits) - pu;
      if (gap < 0) gap = -gap;
      if (gap > worst) {
        worst = gap;
        worst_event = e;
      }
    }
    cond["max_gap"] = rational_json(worst);
    cond["bound"] = rational_json(bound);
    cond["pass"] = worst <= bound;
    if (!events.empty()) {
      EdgeSet ids;
      for (auto p : events[worst_event]) ids.push_back(g.edge(p).id);
      cond["worst_event"] = external(ids);
    }
  }
  r.extra["conditional"] = cond;
  return r;
}

std::size_t check_cut_structure(const Graph& g, std::vector<std::string>& notes, double window) {
  if (g.edge_count() == 0) return 0;
  const std::size_t ell = min_cut_size(g);
  const std::size_t base = components(g).count;
  std::size_t bad = 0;
  // Every cut in the window, not only bonds: the first bound says they are all bonds.
  std::set<EdgeSet> cuts;
  for (auto& cut : enumerate_cuts(g, window_top(ell, window))) {
    EdgeSet s = cut.edges;
    std::sort(s.begin(), s.end());
    if (!s.empty()) cuts.insert(std::move(s));
  }
  for (const auto& c : cuts) {
    const Graph rest = delete_edges(g, c);
    const std::size_t comps = components(rest).count;
    if (comps != base + 1) {
      ++bad;
      notes.push_back("cut of size " + std::to_string(c.size()) + " leaves " + std::to_string(comps) + " components");
    }
    bool has_cut = false;
    for (const auto& members : components(rest).members()) has_cut = has_cut || members.size() > 1;
    if (!has_cut || rest.edge_count() == 0) continue;
    const std::size_t residual = min_cut_size(rest);
    if (static_cast<double>(residual) < 0.2 * static_cast<double>(ell)) {
      ++bad;
      notes.push_back("residual min cut " + std::to_string(residual) + " below 0.2 * " + std::to_string(ell));
    }
  }
  return bad;
}

std::size_t check_cycle_structure(const Graph& g, std::vector<std::string>& notes, double window) {
  const auto gl = girth(g);
  if (!gl) return 0;
  const std::size_t ell = *gl;
  std::size_t bad = 0;
  for (const auto& c : window_cycles(g, window)) {
    const Contraction ct = contract(g, c);
    std::optional<std::size_t> residual;
    if (!ct.induced_loops.empty())
      residual = 1;
    else
      residual = girth(ct.graph);
    if (residual && static_cast<double>(*residual) < 0.2 * static_cast<double>(ell)) {
      ++bad;
      notes.push_back("contracted girth " + std::to_string(*residual) + " below 0.2 * " + std::to_string(ell));
    }
  }
  return bad;
}

ExperimentReport sparsify_experiment(const Graph& g, std::size_t k, double epsilon, double delta,
                                     const SparsifyOptions& opts) {
  if (g.vertex_count() < 2) throw std::invalid_argument("sparsify needs at least two vertices");
  const ResistanceTable table = leverage_scores(g, false);
  const SparsifyRates rates = sparsify_rates(g, table, k, epsilon, delta, true);
  const auto exps = dyadic_exponents(rates.p);
  BuildOptions bo;
  bo.max_seed_bits = opts.base.sample ? 62 : opts.base.budget_bits;
  const SampleSpace space = with_dyadic_marginals(exact_builder(opts.exact, bo), exps, k, 0);

  ExperimentReport r = start("sparsify", g, space);
  r.spec["k"] = k;
  r.spec["epsilon"] = epsilon;
  r.spec["delta"] = delta;
  r.deviations = rates.deviations;
  Rational expected = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) expected += space.marginal(i);

  BigInt kept_total = 0;
  double worst_lo = 1.0, worst_hi = 1.0;
  const Visit v = visit(space, opts.base, [&](const BitVec& x, std::uint64_t seed) {
    ++r.success.total;
    Graph h(g.vertex_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      if (!x.get(i)) continue;
      const Edge& e = g.edge(i);
      h.add_edge(e.u, e.v, e.w / to_double(space.marginal(i)));
    }
    kept_total += h.edge_count();
    const ApproxCheck a = spectral_approx_check(g, h, epsilon);
    worst_lo = std::min(worst_lo, a.min_ratio);
    worst_hi = std::max(worst_hi, a.max_ratio);
    if (a.pass) {
      ++r.success.hits;
    } else if (r.witnesses.size() < kWitnessCap) {
      r.witnesses.push_back({{"seed", seed}, {"min_ratio", a.min_ratio}, {"max_ratio", a.max_ratio}});
    }
  });
  finish(r, v);
  const Rational mean = r.success.total == 0 ? Rational(0) : Rational(kept_total, r.success.total);
  const double n = static_cast<double>(g.vertex_count());
  r.extra["s"] = rates.s;
  r.extra["expected_edges"] = rational_json(expected);
  r.extra["mean_edges"] = rational_json(mean);
  r.extra["mean_matches_expected"] = !v.sampled && mean == expected;
  r.extra["edge_bound"] = 18.0 * std::numbers::e * n * std::log(n) / (epsilon * epsilon) *
                          std::pow(n / delta, 2.0 / static_cast<double>(k));
  r.extra["target_rate"] = 1.0 - 2.0 * delta;
  r.extra["worst_min_ratio"] = worst_lo;
  r.extra["worst_max_ratio"] = worst_hi;
  std::size_t capped = 0;
  for (double p : rates.p) capped += p >= 1.0;
  r.extra["edges_at_rate_one"] = capped;
  return r;
}

ExperimentReport reweight_then_connectivity(const Graph& g, std::size_t space_k, const PipelineOptions& opts) {
  if (components(g).count != 1) throw std::invalid_argument("reweight pipeline needs a connected graph");
  const std::size_t c = min_cut_size(g);
  if (c < 2) throw std::invalid_argument("reweight pipeline needs min cut >= 2");
  if (opts.multipliers.empty()) throw std::invalid_argument("no multipliers given");
  const WeightingResult w = reweight_min_cut(g);
  const double log_n = std::log2(static_cast<double>(g.vertex_count()));
  BuildOptions bo;
  bo.max_seed_bits = opts.base.sample ? 62 : opts.base.budget_bits;

  ExperimentReport best;
  bool have_best = false;
  nlohmann::json per = nlohmann::json::array();
  std::vector<std::string> deviations = w.deviations;
  std::vector<double> mults = opts.multipliers;
  std::sort(mults.begin(), mults.end());
  for (double mult : mults) {
    std::vector<double> p;
    for (double lev : w.leverage) p.push_back(std::min(1.0, mult * lev * log_n));
    const SampleSpace space = with_dyadic_marginals(exact_builder(opts.exact, bo), dyadic_exponents(p), space_k, 0);
    ExperimentReport r = connectivity_experiment(g, space, opts.base);
    const bool ok = r.rate() >= opts.target;
    per.push_back({{"multiplier", mult},
                   {"seed_bits", space.seed_bits()},
                   {"success", rate_json(r.success)},
                   {"mean_kept", r.extra["mean_kept"]},
                   {"pass", ok}});
    if (ok && !have_best) {
      best = std::move(r);
      best.spec["multiplier"] = mult;
      have_best = true;
    } else if (!have_best && mult == mults.back()) {
      best = std::move(r);
      best.spec["multiplier"] = mult;
    }
  }
  best.experiment = "reweight-connectivity";
  best.spec["min_cut"] = c;
  best.spec["space_k"] = space_k;
  best.spec["target"] = rational_json(opts.target);
  best.extra["multipliers"] = per;
  best.extra["smallest_passing"] = have_best ? best.spec["multiplier"] : nlohmann::json(nullptr);
  best.extra["weighting"] = {{"delta", w.delta},
                             {"levels", w.levels},
                             {"max_leverage", w.max_leverage},
                             {"bound", w.bound},
                             {"leverage_ok", w.leverage_ok()}};
  for (auto& d : deviations) best.deviations.push_back(d);
  return best;
}

}  // namespace derand
