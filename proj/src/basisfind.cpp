#include "derand/basisfind.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace derand {

namespace {

BuildOptions build_options(const Constants& c) {
  BuildOptions o;
  o.max_seed_bits = c.allow_sampling ? 62 : c.budget_bits;
  return o;
}

unsigned construction_seed_bits(Construction kind, std::size_t n, std::size_t k) {
  switch (kind) {
    case Construction::polynomial:
      return kwise_seed_bits(n, k);
    case Construction::bch:
      return bch_seed_bits(n, k);
    default:
      return static_cast<unsigned>(std::min<std::size_t>(n, 4096));
  }
}

// Calls f on every support vector, or on sampled vectors when the support is over budget and sampling is allowed.
// Returns true when sampled.
template <class F>
bool visit_support(const SampleSpace& space, const Constants& c, F&& f) {
  if (space.seed_bits() <= c.budget_bits) {
    SpaceCursor cur = space.enumerate(c.budget_bits);
    while (cur.next()) f(cur.vector());
    return false;
  }
  if (!c.allow_sampling) throw SupportTooLarge(space.seed_bits(), c.budget_bits);
  for (auto seed : sample_seeds(space, c.sample_count, c.sample_seed)) f(space.generate(seed));
  return true;
}

EdgeSet select(const EdgeSet& elems, const BitVec& v) {
  EdgeSet out;
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (v.get(i)) out.push_back(elems[i]);
  return out;
}

std::uint64_t subset_count(std::size_t n, std::size_t w) {
  // sum_{j=1..w} C(n, j), saturating
  const std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t total = 0, c = 1;
  for (std::size_t j = 1; j <= w && j <= n; ++j) {
    c = c * (n - j + 1) / j;
    if (c > cap) return cap;
    total += c;
    if (total > cap) return cap;
  }
  return total;
}

std::string encode(const std::vector<std::size_t>& idx, std::size_t skip) {
  std::string key;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i == skip) continue;
    key.push_back(static_cast<char>(idx[i] & 0xff));
    key.push_back(static_cast<char>(idx[i] >> 8));
  }
  return key;
}

CircuitList list_by_subsets(OracleSession& session, std::size_t ell, const Constants& c, const std::string& label) {
  CircuitList out;
  out.ell = ell;
  out.top = c.window_top(ell);
  out.branch = "subsets";
  const EdgeSet elems = session.elements();
  const std::size_t n = elems.size(), w = std::min(out.top, n);
  out.support = subset_count(n, w);
  if (out.support > (std::uint64_t{1} << c.budget_bits)) throw SupportTooLarge(ceil_log2(out.support), c.budget_bits);

  session.begin_round(label);
  std::unordered_set<std::string> dep_prev;
  for (std::size_t j = 1; j <= w; ++j) {
    std::unordered_set<std::string> dep_cur;
    std::vector<std::size_t> idx(j);
    for (std::size_t i = 0; i < j; ++i) idx[i] = i;
    while (true) {
      EdgeSet s(j);
      for (std::size_t i = 0; i < j; ++i) s[i] = elems[idx[i]];
      if (!session.query(s)) {
        bool minimal = true;
        for (std::size_t drop = 0; j > 1 && drop < j && minimal; ++drop)
          if (dep_prev.count(encode(idx, drop))) minimal = false;
        dep_cur.insert(encode(idx, j));
        if (minimal) out.circuits.push_back(std::move(s));
      }
      // next combination
      std::size_t i = j;
      while (i > 0 && idx[i - 1] == n - j + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t q = i; q < j; ++q) idx[q] = idx[q - 1] + 1;
    }
    dep_prev = std::move(dep_cur);
  }
  session.end_round();
  return out;
}

CircuitList list_by_space(OracleSession& session, std::size_t ell, const SampleSpace& space, const Constants& c,
                          const std::string& label) {
  CircuitList out;
  out.ell = ell;
  out.top = c.window_top(ell);
  out.branch = "distribution";
  out.support = space.support_size();
  const EdgeSet elems = session.elements();
  std::set<EdgeSet> seen;
  session.begin_round(label);
  out.sampled = visit_support(space, c, [&](const BitVec& v) {
    DetectResult d = detect_single_circuit(session, select(elems, v));
    if (d.reason == DetectResult::Reason::found && seen.insert(d.circuit).second) out.circuits.push_back(d.circuit);
  });
  session.end_round();
  if (out.sampled) out.support = c.sample_count;
  return out;
}

LargeSet largest_independent(OracleSession& session, const SampleSpace& space, const Constants& c) {
  LargeSet out;
  const EdgeSet elems = session.elements();
  session.begin_round("large-set");
  out.sampled = visit_support(space, c, [&](const BitVec& v) {
    EdgeSet s = select(elems, v);
    if (session.query(s) && s.size() >= out.set.size()) out.set = std::move(s);
  });
  if (session.query(elems)) {
    out.set = elems;
    out.whole = true;
  }
  session.end_round();
  out.support = out.sampled ? c.sample_count : space.support_size();
  return out;
}

}  // namespace

DetectResult detect_single_circuit(OracleSession& session, const EdgeSet& candidate) {
  const bool own = !session.ledger().in_round();
  if (own) session.begin_round("detect");
  const bool whole = session.query(candidate);
  std::vector<bool> critical(candidate.size());
  EdgeSet minus(candidate.size() > 0 ? candidate.size() - 1 : 0);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    std::copy(candidate.begin(), candidate.begin() + static_cast<std::ptrdiff_t>(i), minus.begin());
    std::copy(candidate.begin() + static_cast<std::ptrdiff_t>(i) + 1, candidate.end(),
              minus.begin() + static_cast<std::ptrdiff_t>(i));
    critical[i] = session.query(minus);
  }
  if (own) session.end_round();

  DetectResult out;
  if (whole) return out;
  for (std::size_t i = 0; i < candidate.size(); ++i)
    if (critical[i]) out.circuit.push_back(candidate[i]);
  out.reason = out.circuit.empty() ? DetectResult::Reason::multiple : DetectResult::Reason::found;
  return out;
}

EdgeSet circuit_maxima(const std::vector<EdgeSet>& circuits) {
  EdgeSet out;
  for (const auto& c : circuits) {
    if (c.empty()) throw std::invalid_argument("empty circuit");
    out.push_back(*std::max_element(c.begin(), c.end()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EdgeSet delete_circuits(const EdgeSet& e, const std::vector<EdgeSet>& circuits) {
  for (const auto& c : circuits)
    for (auto id : c)
      if (!std::binary_search(e.begin(), e.end(), id)) throw std::invalid_argument("circuit is not contained in E");
  const EdgeSet drop = circuit_maxima(circuits);
  EdgeSet out;
  std::set_difference(e.begin(), e.end(), drop.begin(), drop.end(), std::back_inserter(out));
  return out;
}

SpaceBuilder exact_space_builder(const Constants& c) {
  const BuildOptions opts = build_options(c);
  const Construction kind = c.exact;
  return [opts, kind](std::size_t n, std::size_t k, const Rational&) {
    k = std::min(k, n);
    if (kind == Construction::full || n <= construction_seed_bits(kind, n, k)) {
      SampleSpace s = build_full(n, opts);
      return s;
    }
    return kind == Construction::bch ? build_kwise_bch(n, k, opts) : build_kwise(n, k, opts);
  };
}

SpaceBuilder almost_space_builder(const Constants& c) {
  const BuildOptions opts = build_options(c);
  return [opts](std::size_t n, std::size_t k, const Rational& delta) {
    k = std::min(k, n);
    if (n <= almost_kwise_seed_bits(n, k, delta)) return build_full(n, opts);
    return build_almost_kwise(n, k, delta, opts);
  };
}

SampleSpace cycle_listing_space(std::size_t n, std::size_t ell, std::size_t m, const Constants& c) {
  const auto k = static_cast<std::size_t>(std::ceil(c.cyc_k_mult * static_cast<double>(ell) - 1e-12));
  return with_marginal(almost_space_builder(c), n, std::max<std::size_t>(1, std::min(k, n)), c.cyc_delta(m),
                       c.cyc_exponent(ell, m));
}

SampleSpace cut_listing_space(std::size_t n, std::size_t ell, std::size_t m, const Constants& c) {
  const auto k = static_cast<std::size_t>(std::ceil(c.cut_k_mult * static_cast<double>(ell) - 1e-12));
  return with_marginal(exact_space_builder(c), n, std::max<std::size_t>(1, std::min(k, n)), 0, c.cut_exponent(ell, m));
}

SampleSpace girth_large_set_space(std::size_t n, std::size_t m, const Constants& c) {
  return almost_space_builder(c)(n, c.k_girth(m), c.girth_delta(m));
}

SampleSpace cut_large_set_space(std::size_t n, std::size_t m, const Constants& c) {
  return exact_space_builder(c)(n, c.k_cut(m), 0);
}

CircuitList list_short_cycles(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c) {
  if (session.kind() != MatroidKind::graphic) throw std::invalid_argument("list_short_cycles needs a graphic session");
  if (ell == 0) throw std::invalid_argument("ell must be positive");
  if (ell <= c.small_ell_cutoff) return list_by_subsets(session, ell, c, "list-cycles");
  const SampleSpace space = cycle_listing_space(session.elements().size(), ell, m, c);
  return list_by_space(session, ell, space, c, "list-cycles");
}

CircuitList list_small_cuts(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c) {
  if (session.kind() != MatroidKind::cographic) throw std::invalid_argument("list_small_cuts needs a cographic session");
  if (ell == 0) throw std::invalid_argument("ell must be positive");
  if (ell <= c.small_ell_cutoff) return list_by_subsets(session, ell, c, "list-cuts");
  const SampleSpace space = cut_listing_space(session.elements().size(), ell, m, c);
  return list_by_space(session, ell, space, c, "list-cuts");
}

CircuitList list_short_circuits(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c) {
  return session.kind() == MatroidKind::graphic ? list_short_cycles(session, ell, m, c)
                                                : list_small_cuts(session, ell, m, c);
}

LargeSet find_large_independent_set_graphic(OracleSession& session, std::size_t m, const Constants& c) {
  if (session.kind() != MatroidKind::graphic) throw std::invalid_argument("graphic routine on a cographic session");
  const std::size_t n = session.elements().size();
  if (n == 0) return {};
  return largest_independent(session, girth_large_set_space(n, m, c), c);
}

LargeSet find_large_independent_set_cographic(OracleSession& session, std::size_t m, const Constants& c) {
  if (session.kind() != MatroidKind::cographic) throw std::invalid_argument("cographic routine on a graphic session");
  const std::size_t n = session.elements().size();
  if (n == 0) return {};
  return largest_independent(session, cut_large_set_space(n, m, c), c);
}

LargeSet find_large_independent_set(OracleSession& session, std::size_t m, const Constants& c) {
  return session.kind() == MatroidKind::graphic ? find_large_independent_set_graphic(session, m, c)
                                                : find_large_independent_set_cographic(session, m, c);
}

double round_scale(std::size_t m) {
  const double a = std::max(1.0, std::log2(static_cast<double>(std::max<std::size_t>(m, 1))));
  return a * std::max(1.0, std::log2(a));
}

BasisReport find_basis(OracleSession& session, const Constants& c, std::size_t m, const FindOptions& opts) {
  if (!session.contracted().empty() || !session.deleted().empty() || session.ledger().total_queries() != 0)
    throw std::invalid_argument("find_basis needs a fresh session");
  BasisReport rep;
  rep.kind = session.kind();
  rep.m = m ? m : session.ground().edge_count();
  rep.constants = c;
  for (const auto& s : c.substitutions()) rep.deviations.push_back("constant substitution: " + s);

  auto violation = [&](const std::string& what) {
    if (c.strict) throw ContractViolation(what);
    rep.deviations.push_back(what);
  };

  const std::size_t limit = c.sweep_limit(rep.kind, rep.m);
  while (!session.elements().empty()) {
    OuterStep step;
    step.elements_before = session.elements().size();
    for (std::size_t ell = 1; ell <= limit && !session.elements().empty(); ell = c.next_ell(ell)) {
      const std::size_t rank_before = session.rank();
      const CircuitList list = list_short_circuits(session, ell, rep.m, c);
      rep.sampled = rep.sampled || list.sampled;
      const EdgeSet drop = circuit_maxima(list.circuits);
      session.delete_elements(drop);
      if (session.rank() != rank_before) throw ContractViolation("rank changed after deleting circuits");
      step.sweep.push_back({ell, list.top, list.circuits.size(), drop.size(), list.branch});
      if (opts.check_windows && session.elements().size() <= opts.check_max_elements) {
        ++rep.window_checks;
        if (!session.circuits_up_to(list.top).empty())
          throw ContractViolation("a circuit of size <= " + std::to_string(list.top) + " survived its window");
      }
    }
    if (session.elements().empty()) {
      rep.trace.push_back(step);
      break;
    }
    step.min_circuit = session.min_circuit_size();
    if (step.min_circuit != 0 && step.min_circuit <= limit)
      violation("large-set precondition failed: smallest circuit " + std::to_string(step.min_circuit) +
                " <= threshold " + std::to_string(limit));
    const std::size_t size_before = session.elements().size();
    const LargeSet s = find_large_independent_set(session, rep.m, c);
    rep.sampled = rep.sampled || s.sampled;
    if (s.set.empty()) throw ContractViolation("large-set routine returned no elements on a non-empty minor");
    if (10 * s.set.size() < size_before)
      violation("large-set size " + std::to_string(s.set.size()) + " below |E|/10 for |E| = " +
                std::to_string(size_before));
    session.contract(s.set);
    step.independent = s.set.size();
    step.whole = s.whole;
    rep.basis.insert(rep.basis.end(), s.set.begin(), s.set.end());
    rep.trace.push_back(step);
  }
  std::sort(rep.basis.begin(), rep.basis.end());
  if (rep.sampled)
    rep.deviations.push_back("NON-DERANDOMIZED: some supports were sampled with seed " + std::to_string(c.sample_seed));

  const Graph& g = session.ground();
  rep.rank = matroid_rank(g, rep.kind, g.edge_ids());
  rep.certified = independent(g, rep.kind, rep.basis) && rep.basis.size() == rep.rank;
  if (!rep.certified) throw ContractViolation("returned set is not a basis");
  rep.rounds = session.ledger().total_rounds();
  rep.total_queries = session.ledger().total_queries();
  rep.queries = session.ledger().per_round();
  rep.ledger = session.ledger().to_json();
  return rep;
}

nlohmann::json BasisReport::to_json() const {
  nlohmann::json basis_json = nlohmann::json::array();
  for (auto id : basis) basis_json.push_back(id + 1);
  nlohmann::json trace_json = nlohmann::json::array();
  for (const auto& t : trace) {
    nlohmann::json sweep = nlohmann::json::array();
    for (const auto& s : t.sweep)
      sweep.push_back({{"ell", s.ell}, {"top", s.top}, {"circuits", s.circuits}, {"deleted", s.deleted},
                       {"branch", s.branch}});
    trace_json.push_back({{"elements_before", t.elements_before},
                          {"sweep", sweep},
                          {"min_circuit", t.min_circuit},
                          {"independent", t.independent},
                          {"whole", t.whole}});
  }
  return {{"kind", kind_name(kind)},
          {"m", m},
          {"basis", basis_json},
          {"rank", rank},
          {"certified", certified},
          {"mode", sampled ? "NON-DERANDOMIZED" : "enumeration"},
          {"rounds", rounds},
          {"queries", queries},
          {"total_queries", total_queries},
          {"round_scale", round_scale(m)},
          {"phases", ledger.value("phases", nlohmann::json::array())},
          {"constants_used", constants.to_json()},
          {"deviations", deviations},
          {"trace", trace_json}};
}

}  // namespace derand
