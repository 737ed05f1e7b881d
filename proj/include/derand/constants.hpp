#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "derand/matroid.hpp"
#include "derand/rational.hpp"
#include "derand/samplespace.hpp"

namespace derand {

// Every threshold and exponent the basis-finding algorithms use. Logarithms are base 2.
struct Constants {
  std::string preset = "desk";

  double girth_mult = 0.5;       // graphic: sweep and precondition threshold girth_mult * log m
  double kappa = 0.5;            // cographic: sweep and precondition threshold kappa * log m
  double k_girth_mult = 0.5;     // graphic large-set space is k-wise with k = k_girth_mult * log m
  double girth_delta_exp = 0.5;  // and delta = m^-girth_delta_exp
  double k_cut_mult = 0.75;      // cographic large-set space is k-wise with k = k_cut_mult * log m

  double c_cyc = 1.0;            // cycle listing marginal exponent c_cyc * log m / l
  double cyc_delta_exp = 0.5;    // cycle listing delta = m^-cyc_delta_exp
  double cyc_k_mult = 2.0;       // cycle listing independence k = cyc_k_mult * l
  double c_cut = 0.5;            // cut listing marginal exponent c_cut * log m / l
  double cut_k_mult = 2.0;       // cut listing independence k = cut_k_mult * l

  std::size_t small_ell_cutoff = 100;  // l at or below this lists circuits by querying all small subsets
  double window = 1.01;                // circuit window [l, ceil(window * l)]

  Construction exact = Construction::bch;
  unsigned budget_bits = kDefaultBudgetBits;
  bool allow_sampling = false;
  std::size_t sample_count = 4096;
  std::uint64_t sample_seed = 0x5eed;
  // Contract violations throw instead of being recorded.
  bool strict = false;

  static Constants asymptotic();
  static Constants desk();

  static unsigned log_ceil(double mult, std::size_t m);  // ceil(mult * log2 m), at least 1
  unsigned sweep_limit(MatroidKind kind, std::size_t m) const;
  unsigned k_girth(std::size_t m) const { return log_ceil(k_girth_mult, m); }
  unsigned k_cut(std::size_t m) const { return log_ceil(k_cut_mult, m); }
  Rational girth_delta(std::size_t m) const;
  Rational cyc_delta(std::size_t m) const;
  unsigned cyc_exponent(std::size_t ell, std::size_t m) const;
  unsigned cut_exponent(std::size_t ell, std::size_t m) const;
  std::size_t window_top(std::size_t ell) const;
  std::size_t next_ell(std::size_t ell) const;

  nlohmann::json to_json() const;
  // Fields missing from j keep the values of the preset named by j["preset"] (default desk).
  static Constants from_json(const nlohmann::json& j);
  // Every field that differs from the asymptotic preset.
  std::vector<std::string> substitutions() const;
};

}  // namespace derand
