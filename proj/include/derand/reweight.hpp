#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/graph.hpp"
#include "derand/rational.hpp"

namespace derand {

struct ClusterOptions {
  double alpha = 1.0;
  // Doubling stops once alpha exceeds this value.
  double alpha_cap = 1u << 20;
};

struct ClusterPartition {
  std::vector<std::vector<std::size_t>> parts;  // sorted vertex lists, ordered by smallest member
  std::vector<std::size_t> part_of;
  std::vector<double> part_rdiam;
  double crossing_weight = 0.0;
  double total_weight = 0.0;
  double max_part_rdiam = 0.0;
  double alpha = 0.0;         // value the last attempt ran with
  double radius_bound = 0.0;  // alpha * |V| / w(E)
  std::size_t attempts = 0;
};

class ClusteringFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy ball growing in the effective-resistance metric. Every part induces a connected subgraph.
ClusterPartition cluster_low_rdiam(const Graph& g, const ClusterOptions& opts = {});

struct LevelStat {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t parts = 0;
  std::size_t crossing = 0;
  std::size_t min_cut = 0;  // of this level's multigraph; 0 for a single vertex
  double alpha_used = 0.0;
  double alpha_achieved = 0.0;  // max part R_diam * |E_i| / |V_i|
};

struct DiameterCheck {
  std::size_t level = 0;
  std::size_t part = 0;
  std::size_t vertices = 0;
  double rdiam = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ReweightOptions {
  std::size_t delta = 0;  // 0 selects 2 n ceil(log2 m)
  ClusterOptions cluster;
  // Inductive diameter bound is checked when n is at most this.
  std::size_t diameter_check_max_n = 24;
};

struct WeightingResult {
  std::size_t delta = 0;
  std::vector<unsigned> level;  // graph edge order
  std::vector<double> leverage;
  std::size_t levels = 0;
  std::size_t min_cut = 0;
  double alpha_eff = 0.0;
  double max_leverage = 0.0;
  double bound = 0.0;        // 4 alpha_eff / c
  double proven_bound = 0.0;  // 2 alpha_eff (1 + n/delta)^(levels-1) / c
  std::vector<LevelStat> stats;
  std::vector<DiameterCheck> diameter_checks;
  std::vector<std::string> deviations;

  Rational weight(std::size_t pos) const;
  BigInt weight_ratio() const;  // delta^(levels-1)
  bool levels_ok(std::size_t m) const;
  bool halving_ok() const;
  bool monotone_ok() const;
  bool diameters_ok() const;
  bool leverage_ok() const { return max_leverage <= bound * (1 + 1e-9); }
};

// Recursive clustering/contraction weighting of an unweighted connected graph.
WeightingResult reweight_min_cut(const Graph& g, const ReweightOptions& opts = {});

// g with its weights replaced by the result's 1/delta^level.
Graph apply_weights(const Graph& g, const WeightingResult& r);

struct ConverseCheck {
  bool precondition = false;  // every leverage <= 1/c
  bool pass = false;          // unweighted min cut >= c
  double c = 0.0;
  double max_leverage = 0.0;
  std::size_t min_cut = 0;
  CutSet witness;  // a cut smaller than c when the check fails
};

// c = 0 uses c = 1 / max leverage.
ConverseCheck verify_converse(const Graph& weighted, double c = 0.0);

// Electric flow energy for injections alpha at sources and extractions beta at sinks (each summing to 1).
double multi_terminal_energy(const Graph& g, const std::vector<std::size_t>& sources, const std::vector<double>& alpha,
                             const std::vector<std::size_t>& sinks, const std::vector<double>& beta);

struct ContractionBound {
  double rdiam = 0.0;        // R_diam(G)
  double contracted = 0.0;   // R_1 = R_diam(G')
  double part_max = 0.0;     // R_0 = max R_diam(G[V_i])
  std::size_t parts = 0;     // h
  bool holds(double slack) const { return rdiam <= contracted + static_cast<double>(parts) * part_max + slack; }
};

// Parts must induce connected subgraphs and g must be connected.
ContractionBound contraction_diameter_bound(const Graph& g, const std::vector<std::vector<std::size_t>>& parts);

nlohmann::json weighting_json(const WeightingResult& r);
void write_weighting_csv(const Graph& g, const WeightingResult& r, std::ostream& out);

}  // namespace derand
