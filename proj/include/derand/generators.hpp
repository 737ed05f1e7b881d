#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/graph.hpp"

namespace derand {

// Portable draws on top of mt19937_64 (the std distributions differ between library vendors).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

struct FamilyParams {
  std::map<std::string, std::string> values;

  // "n=7,s=3,seed=1"
  static FamilyParams parse(const std::string& text);
  bool has(const std::string& key) const { return values.count(key) != 0; }
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::string get_string(const std::string& key) const;
  std::vector<long long> get_list(const std::string& key) const;  // "3:3:4"
  nlohmann::json to_json() const;
};

struct Generated {
  Graph graph;
  std::string family;
  FamilyParams params;
  std::size_t min_cut = 0;
  std::optional<std::size_t> girth;
  std::size_t components = 0;

  nlohmann::json summary() const;
};

// Families: cycle(n), path(n), theta(a,b,c), complete(n), multi_cycle(n,s), expander_like(n,d,seed),
// subdivided(h,s), dumbbell(h), cycles(lens), gnp(n,p,seed), connected_gnp(n,p,seed), tree(n,seed), file(path).
Generated gen_graph(const std::string& family, const FamilyParams& params);
std::vector<std::string> family_names();

Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph theta_graph(std::size_t a, std::size_t b, std::size_t c);
Graph complete_graph(std::size_t n);
Graph multi_cycle(std::size_t n, std::size_t s);
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);
Graph subdivided_complete(std::size_t h, std::size_t s);
Graph dumbbell(std::size_t h);
Graph disjoint_cycles(const std::vector<std::size_t>& lengths);
Graph gnp(std::size_t n, double p, std::uint64_t seed);
Graph connected_gnp(std::size_t n, double p, std::uint64_t seed);
Graph random_tree(std::size_t n, std::uint64_t seed);

}  // namespace derand
