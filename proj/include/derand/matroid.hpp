#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/graph.hpp"

namespace derand {

enum class MatroidKind { graphic, cographic };

std::string kind_name(MatroidKind k);
MatroidKind kind_from_name(const std::string& name);

bool ind_graphic(const Graph& g, const EdgeSet& s);
bool ind_cographic(const Graph& g, const EdgeSet& s);
bool independent(const Graph& g, MatroidKind kind, const EdgeSet& s);

// Rank of an edge subset in the matroid on g (no ledger involvement).
std::size_t matroid_rank(const Graph& g, MatroidKind kind, const EdgeSet& s);

class RoundViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RoundRecord {
  std::string label;
  std::size_t queries = 0;
};

class QueryLedger {
 public:
  void begin_round(const std::string& label);
  RoundRecord end_round();
  void count_query();
  bool in_round() const { return open_; }

  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  std::size_t total_rounds() const { return rounds_.size(); }
  // Monotone counter of every issued query, including the open round.
  std::size_t total_queries() const { return issued_; }
  std::vector<std::size_t> per_round() const;

  // {phases: [{label, rounds: [counts]}], total_rounds, total_queries}
  nlohmann::json to_json() const;

 private:
  std::vector<RoundRecord> rounds_;
  RoundRecord current_;
  bool open_ = false;
  std::size_t issued_ = 0;
};

// Independence oracle for the minor M/T\D of a graphic or cographic matroid, metered by a ledger.
class OracleSession {
 public:
  OracleSession(Graph ground, MatroidKind kind);

  const Graph& ground() const { return ground_; }
  MatroidKind kind() const { return kind_; }
  const EdgeSet& contracted() const { return contracted_; }
  const EdgeSet& deleted() const { return deleted_; }
  // Elements of the current minor, ascending id.
  EdgeSet elements() const;

  void begin_round(const std::string& label) { ledger_.begin_round(label); }
  RoundRecord end_round() { return ledger_.end_round(); }
  // Answers Ind_M(S u T); must be inside a round.
  bool query(const EdgeSet& s);
  // The whole batch is formed before any answer is produced.
  std::vector<bool> query_batch(const std::vector<EdgeSet>& batch);
  std::vector<bool> run_round(const std::string& label, const std::vector<EdgeSet>& batch);

  // Bookkeeping; contraction requires T' independent in the current minor.
  void contract(const EdgeSet& more);
  void delete_elements(const EdgeSet& more);

  // Test oracles, computed from the graph; never touch the ledger.
  std::size_t rank() const;
  bool independent_unmetered(const EdgeSet& s) const;
  // Smallest circuit of the current minor (0 when it has none).
  std::size_t min_circuit_size() const;
  // All circuits of the current minor with at most max_size elements (brute force, small graphs only).
  std::vector<EdgeSet> circuits_up_to(std::size_t max_size) const;

  QueryLedger& ledger() { return ledger_; }
  const QueryLedger& ledger() const { return ledger_; }

 private:
  enum class State : unsigned char { absent, free, contracted, deleted };
  void validate(const EdgeSet& s);
  void rebuild_cache();
  bool answer(const EdgeSet& s) const;

  Graph ground_;
  MatroidKind kind_;
  EdgeSet contracted_;
  EdgeSet deleted_;
  std::vector<State> state_;
  QueryLedger ledger_;

  // graphic: vertex label after contracting T
  std::vector<std::size_t> label_;
  // cographic: spanning forest of G - T (membership by id) and base component count
  std::vector<bool> forest_;
  std::size_t base_components_ = 0;

  mutable std::vector<std::size_t> stamp_;
  mutable std::vector<std::size_t> uf_parent_;
  mutable std::vector<std::size_t> uf_stamp_;
  mutable std::size_t epoch_ = 0;
};

}  // namespace derand
