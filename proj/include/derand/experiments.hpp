#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/graph.hpp"
#include "derand/rational.hpp"
#include "derand/samplespace.hpp"

namespace derand {

inline constexpr std::size_t kWitnessCap = 10;

struct ExperimentOptions {
  unsigned budget_bits = kDefaultBudgetBits;
  // When set and the support is over budget, evaluate this many pseudorandom support points instead.
  std::optional<std::size_t> sample;
  std::uint64_t sample_seed = 0x5eed;
};

struct RateCount {
  BigInt hits = 0;
  BigInt total = 0;
  Rational rate() const { return total == 0 ? Rational(0) : Rational(hits, total); }
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json spec = nlohmann::json::object();
  RateCount success;
  bool enumerated = true;
  std::uint64_t sample_seed = 0;
  std::vector<nlohmann::json> witnesses;  // failing support points, at most kWitnessCap
  std::vector<std::string> deviations;
  nlohmann::json extra = nlohmann::json::object();

  Rational rate() const { return success.rate(); }
  nlohmann::json to_json() const;
};

// Bit i of every support vector keeps edge at graph position i.
ExperimentReport connectivity_experiment(const Graph& g, const SampleSpace& space, const ExperimentOptions& opts = {});

// Rigorous lower bound on the connectivity success rate: 1 - sum over bonds B of Pr[all of B dropped], where each term
// is bounded through min(|B|, k) coordinates (plus delta for almost spaces).
Rational connectivity_union_bound(const Graph& g, const SampleSpace& space);

// Success = kept edges acyclic and at least m/10 of them; extra carries the acyclic and size rates separately.
ExperimentReport cyclefree_experiment(const Graph& g, const SampleSpace& space, const ExperimentOptions& opts = {});

// Success = cut kept entirely while no other non-empty cut is inside the kept set.
ExperimentReport unique_cut_survival_experiment(const Graph& g, const EdgeSet& cut, const SampleSpace& space,
                                                const ExperimentOptions& opts = {});
// Success = cycle kept entirely and the kept set contains no other cycle. extra.conditional carries the
// |Pr[A | C kept] - Pr_U[A]| <= 2 delta / Pr[C kept] check over small events A.
ExperimentReport unique_cycle_survival_experiment(const Graph& g, const EdgeSet& cycle, const SampleSpace& space,
                                                  const ExperimentOptions& opts = {});

// Window objects of g: bonds of size in [l, top] with l the minimum cut, cycles of length in [girth, top].
std::vector<EdgeSet> window_cuts(const Graph& g, double window = 1.01);
std::vector<EdgeSet> window_cycles(const Graph& g, double window = 1.01);

bool is_bond(const Graph& g, const EdgeSet& s);
bool is_cycle(const Graph& g, const EdgeSet& s);

// Structural checks over every window cut / cycle: one extra component and residual cut >= 0.2 l;
// contracted girth >= 0.2 l. Returns the number of violations; details are appended to notes.
std::size_t check_cut_structure(const Graph& g, std::vector<std::string>& notes, double window = 1.01);
std::size_t check_cycle_structure(const Graph& g, std::vector<std::string>& notes, double window = 1.01);

struct SparsifyOptions {
  ExperimentOptions base;
  Construction exact = Construction::bch;
};

ExperimentReport sparsify_experiment(const Graph& g, std::size_t k, double epsilon, double delta,
                                     const SparsifyOptions& opts = {});

struct PipelineOptions {
  ExperimentOptions base;
  Construction exact = Construction::bch;
  std::vector<double> multipliers = {0.25, 0.5, 1, 2, 4};
  Rational target = Rational(9, 10);
};

// reweight_min_cut, then marginals min(1, mult * w R log2 n) rounded down to dyadic values, then connectivity
// per support vector for each multiplier.
ExperimentReport reweight_then_connectivity(const Graph& g, std::size_t space_k, const PipelineOptions& opts = {});

}  // namespace derand
