#include "derand/generators.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace derand {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = gen_();
  while (x >= limit);
  return x % bound;
}

double Rng::unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

FamilyParams FamilyParams::parse(const std::string& text) {
  FamilyParams p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("bad family parameter '" + item + "'");
    p.values[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return p;
}

long long FamilyParams::get_int(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw std::invalid_argument("missing family parameter '" + key + "'");
  std::size_t used = 0;
  const long long v = std::stoll(it->second, &used);
  if (used != it->second.size()) throw std::invalid_argument("parameter '" + key + "' is not an integer");
  return v;
}

long long FamilyParams::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double FamilyParams::get_double(const std::string& key, double fallback) const {
  return has(key) ? std::stod(values.at(key)) : fallback;
}

std::string FamilyParams::get_string(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw std::invalid_argument("missing family parameter '" + key + "'");
  return it->second;
}

std::vector<long long> FamilyParams::get_list(const std::string& key) const {
  std::vector<long long> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(std::stoll(item));
  return out;
}

nlohmann::json FamilyParams::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values) j[k] = v;
  return j;
}

nlohmann::json Generated::summary() const {
  nlohmann::json j = {{"family", family},
                      {"params", params.to_json()},
                      {"n", graph.vertex_count()},
                      {"m", graph.edge_count()},
                      {"min_cut", min_cut},
                      {"components", components}};
  j["girth"] = girth ? nlohmann::json(*girth) : nlohmann::json(nullptr);
  return j;
}

namespace {

std::size_t positive(long long v, const char* what, long long lo = 1) {
  if (v < lo) throw std::invalid_argument(std::string(what) + " must be at least " + std::to_string(lo));
  return static_cast<std::size_t>(v);
}

}  // namespace

Graph cycle_graph(std::size_t n) {
  if (n < 2) throw std::invalid_argument("cycle needs n >= 2");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph path_graph(std::size_t n) {
  if (n < 1) throw std::invalid_argument("path needs n >= 1");
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph theta_graph(std::size_t a, std::size_t b, std::size_t c) {
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("theta path lengths must be positive");
  Graph g(2 + (a - 1) + (b - 1) + (c - 1));
  std::size_t next = 2;
  for (std::size_t len : {a, b, c}) {
    std::size_t prev = 0;
    for (std::size_t j = 1; j < len; ++j) {
      g.add_edge(prev, next);
      prev = next++;
    }
    g.add_edge(prev, 1);
  }
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph multi_cycle(std::size_t n, std::size_t s) {
  if (s < 1) throw std::invalid_argument("multi_cycle needs s >= 1");
  return duplicate_edges(cycle_graph(n), s);
}

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d >= n || (n * d) % 2 != 0) throw std::invalid_argument("random regular graph needs d < n and n*d even");
  Rng rng(seed);
  // Pair random stubs one edge at a time, rejecting loops and repeats; restart when stuck.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::size_t> stubs;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t j = 0; j < d; ++j) stubs.push_back(v);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      stuck = true;
      for (int tries = 0; tries < 200; ++tries) {
        const auto i = static_cast<std::size_t>(rng.below(stubs.size()));
        const auto j = static_cast<std::size_t>(rng.below(stubs.size()));
        auto [a, b] = std::minmax(stubs[i], stubs[j]);
        if (i == j || a == b || seen.count({a, b})) continue;
        seen.insert({a, b});
        for (auto k : {std::max(i, j), std::min(i, j)}) {
          stubs[k] = stubs.back();
          stubs.pop_back();
        }
        stuck = false;
        break;
      }
    }
    if (stuck) continue;
    Graph g(n);
    for (auto [a, b] : seen) g.add_edge(a, b);
    if (components(g).count == 1) return g;
  }
  throw std::runtime_error("random regular graph: no simple connected pairing found");
}

Graph subdivided_complete(std::size_t h, std::size_t s) { return subdivide(complete_graph(h), s); }

Graph dumbbell(std::size_t h) {
  if (h < 2) throw std::invalid_argument("dumbbell needs h >= 2");
  Graph g(2 * h);
  for (std::size_t side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = i + 1; j < h; ++j) g.add_edge(side * h + i, side * h + j);
  g.add_edge(0, h);
  return g;
}

Graph disjoint_cycles(const std::vector<std::size_t>& lengths) {
  std::size_t n = 0;
  for (auto l : lengths) {
    if (l < 2) throw std::invalid_argument("cycle lengths must be at least 2");
    n += l;
  }
  Graph g(n);
  std::size_t base = 0;
  for (auto l : lengths) {
    for (std::size_t i = 0; i < l; ++i) g.add_edge(base + i, base + (i + 1) % l);
    base += l;
  }
  return g;
}

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.unit() < p) g.add_edge(i, j);
  return g;
}

Graph random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree needs n >= 1");
  Rng rng(seed);
  Graph g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(static_cast<std::size_t>(rng.below(v)), v);
  return g;
}

Graph connected_gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  Graph g(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::size_t>(rng.below(v));
    g.add_edge(u, v);
    seen.insert({u, v});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.unit() < p && !seen.count({i, j})) g.add_edge(i, j);
  return g;
}

std::vector<std::string> family_names() {
  return {"cycle", "path",   "theta", "complete",      "multi_cycle", "expander_like", "subdivided",
          "dumbbell", "cycles", "gnp",   "connected_gnp", "tree",        "file"};
}

Generated gen_graph(const std::string& family, const FamilyParams& p) {
  Generated out;
  out.family = family;
  out.params = p;
  const auto seed = static_cast<std::uint64_t>(p.get_int("seed", 1));
  if (family == "cycle") {
    out.graph = cycle_graph(positive(p.get_int("n"), "n", 2));
  } else if (family == "path") {
    out.graph = path_graph(positive(p.get_int("n"), "n"));
  } else if (family == "theta") {
    out.graph = theta_graph(positive(p.get_int("a"), "a"), positive(p.get_int("b"), "b"), positive(p.get_int("c"), "c"));
  } else if (family == "complete") {
    out.graph = complete_graph(positive(p.get_int("n"), "n"));
  } else if (family == "multi_cycle") {
    out.graph = multi_cycle(positive(p.get_int("n"), "n", 2), positive(p.get_int("s"), "s"));
  } else if (family == "expander_like") {
    out.graph = random_regular(positive(p.get_int("n"), "n", 2), positive(p.get_int("d"), "d"), seed);
  } else if (family == "subdivided") {
    out.graph = subdivided_complete(positive(p.get_int("h"), "h", 2), positive(p.get_int("s"), "s"));
  } else if (family == "dumbbell") {
    out.graph = dumbbell(positive(p.get_int("h", 5), "h", 2));
  } else if (family == "cycles") {
    std::vector<std::size_t> lens;
    for (auto l : p.get_list("lens")) lens.push_back(positive(l, "cycle length", 2));
    out.graph = disjoint_cycles(lens);
  } else if (family == "gnp") {
    out.graph = gnp(positive(p.get_int("n"), "n"), p.get_double("p", 0.5), seed);
  } else if (family == "connected_gnp") {
    out.graph = connected_gnp(positive(p.get_int("n"), "n"), p.get_double("p", 0.3), seed);
  } else if (family == "tree") {
    out.graph = random_tree(positive(p.get_int("n"), "n"), seed);
  } else if (family == "file") {
    out.graph = load_graph(p.get_string("path"));
  } else {
    throw std::invalid_argument("unknown graph family '" + family + "'");
  }
  out.components = components(out.graph).count;
  out.min_cut = out.graph.edge_count() ? min_cut_size(out.graph) : 0;
  out.girth = girth(out.graph);
  return out;
}

}  // namespace derand
