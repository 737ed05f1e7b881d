#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/bitvec.hpp"
#include "derand/gf2.hpp"
#include "derand/rational.hpp"

namespace derand {

inline constexpr unsigned kDefaultBudgetBits = 24;

enum class Construction { polynomial, bch, small_bias, full };

std::string construction_name(Construction c);
Construction construction_from_name(const std::string& name);

struct SpaceParams {
  std::size_t n = 1;
  std::size_t k = 1;
  Rational delta = 0;
  unsigned p_log_inv = 1;
  bool complemented = false;
};

struct BuildOptions {
  // Builders refuse spaces whose seed exceeds this many bits.
  unsigned max_seed_bits = kDefaultBudgetBits;
};

class SupportTooLarge : public std::runtime_error {
 public:
  SupportTooLarge(unsigned required_bits, unsigned budget_bits);
  unsigned required_bits() const { return required_; }
  unsigned budget_bits() const { return budget_; }

 private:
  unsigned required_;
  unsigned budget_;
};

class SampleSpace;

// Streams the support in a fixed order: outer seed part ascending, inner part in Gray-code order.
class SpaceCursor {
 public:
  explicit SpaceCursor(const SampleSpace& space);
  bool next();
  const BitVec& vector() const { return out_; }
  std::uint64_t seed() const;
  std::uint64_t index() const { return (x_ << inner_bits_) | j_; }

 private:
  void load_block();

  const SampleSpace* space_;
  unsigned inner_bits_;
  std::uint64_t x_ = 0;
  std::uint64_t j_ = 0;
  bool started_ = false;
  bool done_ = false;
  std::vector<BitVec> cols_;
  BitVec base_;
  BitVec out_;
};

class SampleSpace {
 public:
  const SpaceParams& params() const { return params_; }
  std::size_t size() const { return params_.n; }
  unsigned seed_bits() const { return outer_bits_ + inner_bits_; }
  std::uint64_t support_size() const { return std::uint64_t{1} << seed_bits(); }
  Construction construction() const { return kind_; }
  std::size_t base_positions() const { return base_n_; }
  std::size_t base_order() const { return base_k_; }
  bool complemented() const { return complemented_; }

  // Marginal exponent L_i of output i; bit i is 1 with probability 2^-L_i (1 - 2^-L_i if complemented).
  unsigned marginal_exponent(std::size_t i) const;
  Rational marginal(std::size_t i) const;

  BitVec generate(std::uint64_t seed) const;
  SpaceCursor enumerate(unsigned budget_bits = kDefaultBudgetBits) const;
  SampleSpace complement() const;

  nlohmann::json descriptor() const;
  static SampleSpace from_descriptor(const nlohmann::json& d);

 private:
  friend class SpaceCursor;
  friend SampleSpace build_kwise(std::size_t, std::size_t, const BuildOptions&);
  friend SampleSpace build_kwise_bch(std::size_t, std::size_t, const BuildOptions&);
  friend SampleSpace build_full(std::size_t, const BuildOptions&);
  friend SampleSpace build_kwise_compact(std::size_t, std::size_t, const BuildOptions&);
  friend SampleSpace build_almost_kwise(std::size_t, std::size_t, const Rational&, const BuildOptions&);
  friend SampleSpace with_dyadic_marginals(const std::function<SampleSpace(std::size_t, std::size_t, const Rational&)>&,
                                           const std::vector<unsigned>&, std::size_t, const Rational&, bool);

  void block_columns(std::uint64_t x, std::vector<BitVec>& cols) const;
  void map_output(const BitVec& base, BitVec& out) const;

  SpaceParams params_;
  Construction kind_ = Construction::full;
  std::size_t base_n_ = 0;
  std::size_t base_k_ = 0;
  unsigned outer_bits_ = 0;
  unsigned inner_bits_ = 0;
  std::vector<BitVec> columns_;    // linear constructions
  BinaryField code_field_;         // evaluation points / BCH rows
  BinaryField bias_field_;         // small-bias powering field
  std::vector<BitVec> code_rows_;  // small-bias: row i of the k-wise linear code
  std::vector<unsigned> groups_;   // empty = identity output map
  bool complemented_ = false;
};

using SpaceBuilder = std::function<SampleSpace(std::size_t n, std::size_t k, const Rational& delta)>;

// Degree-(k-1) polynomials over GF(2^r), r = ceil(log2(n+1)); bit i = low bit of f(i+1).
SampleSpace build_kwise(std::size_t n, std::size_t k, const BuildOptions& opts = {});
// Dual-BCH linear map; exactly k-wise independent with ceil(k/2)*r seed bits.
SampleSpace build_kwise_bch(std::size_t n, std::size_t k, const BuildOptions& opts = {});
// All 2^n vectors.
SampleSpace build_full(std::size_t n, const BuildOptions& opts = {});
// Smallest-seed exact construction among polynomial, bch and full.
SampleSpace build_kwise_compact(std::size_t n, std::size_t k, const BuildOptions& opts = {});
// Small-bias powering generator composed with the BCH code; bias delta / 2^(k/2).
SampleSpace build_almost_kwise(std::size_t n, std::size_t k, const Rational& delta, const BuildOptions& opts = {});

SpaceBuilder exact_builder(Construction c, const BuildOptions& opts = {});
SpaceBuilder almost_builder(const BuildOptions& opts = {});

// Bit i is the AND of L underlying bits (group T_i); underlying space has n*L positions and order k*L.
SampleSpace with_marginal(const SpaceBuilder& builder, std::size_t n, std::size_t k, const Rational& delta, unsigned L,
                          bool complemented = false);
// Per-position exponents; exponent 0 means the bit is always 1.
SampleSpace with_dyadic_marginals(const SpaceBuilder& builder, const std::vector<unsigned>& exponents, std::size_t k,
                                  const Rational& delta, bool complemented = false);

unsigned ceil_log2(std::uint64_t x);
unsigned kwise_seed_bits(std::size_t n, std::size_t k);
unsigned bch_seed_bits(std::size_t n, std::size_t k);
unsigned almost_kwise_seed_bits(std::size_t n, std::size_t k, const Rational& delta);

// Pseudorandom seeds for the non-derandomized fallback.
std::vector<std::uint64_t> sample_seeds(const SampleSpace& space, std::size_t count, std::uint64_t rng_seed);

struct IndependenceReport {
  Rational max_tv = 0;
  std::vector<std::size_t> worst_subset;
  std::size_t subsets_tested = 0;
  bool exhaustive = true;
};

// Exact TV distance of every restriction to <= k_check coordinates against the product reference
// with the space's marginals. subset_cap = 0 tests every subset.
IndependenceReport verify_independence(const SampleSpace& space, std::size_t k_check, std::size_t subset_cap = 0,
                                       unsigned budget_bits = kDefaultBudgetBits);

nlohmann::json report_json(const IndependenceReport& r);

}  // namespace derand
