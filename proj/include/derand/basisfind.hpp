#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/constants.hpp"
#include "derand/matroid.hpp"
#include "derand/samplespace.hpp"

namespace derand {

struct DetectResult {
  enum class Reason { found, none, multiple };
  Reason reason = Reason::none;
  EdgeSet circuit;  // set when reason == found
};

// One round of |E'| + 1 queries (joins the caller's round when one is open).
DetectResult detect_single_circuit(OracleSession& session, const EdgeSet& candidate);

// Removes, simultaneously, the largest id of every circuit. Throws if a circuit is not inside e.
EdgeSet delete_circuits(const EdgeSet& e, const std::vector<EdgeSet>& circuits);
// The ids delete_circuits would remove.
EdgeSet circuit_maxima(const std::vector<EdgeSet>& circuits);

struct CircuitList {
  std::vector<EdgeSet> circuits;  // discovery order, distinct
  std::size_t ell = 0;
  std::size_t top = 0;  // window [ell, top]
  std::string branch;   // "subsets" or "distribution"
  std::uint64_t support = 0;
  bool sampled = false;
};

struct LargeSet {
  EdgeSet set;
  std::uint64_t support = 0;
  bool whole = false;  // the full element set was independent
  bool sampled = false;
};

// Builder for the distribution a routine needs, falling back to the identity space when that is smaller.
SpaceBuilder exact_space_builder(const Constants& c);
SpaceBuilder almost_space_builder(const Constants& c);

// Distribution used by list_short_cycles for window [ell, ...] (positions = current minor elements).
SampleSpace cycle_listing_space(std::size_t n, std::size_t ell, std::size_t m, const Constants& c);
SampleSpace cut_listing_space(std::size_t n, std::size_t ell, std::size_t m, const Constants& c);
SampleSpace girth_large_set_space(std::size_t n, std::size_t m, const Constants& c);
SampleSpace cut_large_set_space(std::size_t n, std::size_t m, const Constants& c);

CircuitList list_short_cycles(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c);
CircuitList list_small_cuts(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c);
CircuitList list_short_circuits(OracleSession& session, std::size_t ell, std::size_t m, const Constants& c);

LargeSet find_large_independent_set_graphic(OracleSession& session, std::size_t m, const Constants& c);
LargeSet find_large_independent_set_cographic(OracleSession& session, std::size_t m, const Constants& c);
LargeSet find_large_independent_set(OracleSession& session, std::size_t m, const Constants& c);

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FindOptions {
  // After each window, check with brute force that no circuit of size <= top is left (small minors only).
  bool check_windows = false;
  std::size_t check_max_elements = 24;
};

struct SweepStep {
  std::size_t ell = 0, top = 0;
  std::size_t circuits = 0;
  std::size_t deleted = 0;
  std::string branch;
};

struct OuterStep {
  std::size_t elements_before = 0;
  std::vector<SweepStep> sweep;
  std::size_t min_circuit = 0;  // after the sweep (0 = none)
  std::size_t independent = 0;
  bool whole = false;
};

struct BasisReport {
  MatroidKind kind = MatroidKind::graphic;
  std::size_t m = 0;
  EdgeSet basis;
  std::size_t rank = 0;
  bool certified = false;
  bool sampled = false;
  std::size_t rounds = 0;
  std::size_t total_queries = 0;
  std::vector<std::size_t> queries;
  std::vector<OuterStep> trace;
  std::vector<std::string> deviations;
  std::size_t window_checks = 0;
  nlohmann::json ledger;
  Constants constants;

  nlohmann::json to_json() const;
};

// log2 m * log2 log2 m with both factors floored at 1.
double round_scale(std::size_t m);

// m = 0 uses the ground set size.
BasisReport find_basis(OracleSession& session, const Constants& c, std::size_t m = 0, const FindOptions& opts = {});

}  // namespace derand
