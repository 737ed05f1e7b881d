#include "derand/samplespace.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>

namespace derand {

namespace {

std::uint64_t gray(std::uint64_t j) { return j ^ (j >> 1); }

void check_budget(unsigned required, const BuildOptions& opts) {
  if (required > opts.max_seed_bits) throw SupportTooLarge(required, opts.max_seed_bits);
}

std::vector<std::uint64_t> evaluation_points(const BinaryField&, std::size_t n) {
  std::vector<std::uint64_t> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = i + 1;
  return pts;
}

// Row i of the BCH parity map: (a_i, a_i^3, ..., a_i^(2t-1)) as t*r bits.
std::vector<BitVec> bch_rows(const BinaryField& f, std::size_t n, std::size_t k) {
  const unsigned r = f.degree();
  const std::size_t t = (k + 1) / 2;
  std::vector<BitVec> rows(n, BitVec(t * r));
  auto pts = evaluation_points(f, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t a = pts[i];
    const std::uint64_t a2 = f.mul(a, a);
    std::uint64_t p = a;
    for (std::size_t j = 0; j < t; ++j) {
      for (unsigned b = 0; b < r; ++b)
        if ((p >> b) & 1u) rows[i].set(j * r + b);
      p = f.mul(p, a2);
    }
  }
  return rows;
}

unsigned small_bias_degree(std::size_t code_len, std::size_t k, const Rational& delta) {
  if (code_len <= 1) return 1;
  // (L'-1)/2^t <= delta/2^(k/2)  <=>  (L'-1)^2 * 2^k * den^2 <= num^2 * 4^t
  const BigInt num = boost::multiprecision::numerator(delta);
  const BigInt den = boost::multiprecision::denominator(delta);
  BigInt lhs = BigInt(code_len - 1) * BigInt(code_len - 1) * den * den;
  lhs <<= static_cast<unsigned>(k);
  const BigInt rhs0 = num * num;
  for (unsigned t = 1; t < 4096; ++t) {
    BigInt rhs = rhs0;
    rhs <<= 2 * t;
    if (lhs <= rhs) return t;
  }
  throw std::invalid_argument("delta too small");
}

}  // namespace

SupportTooLarge::SupportTooLarge(unsigned required_bits, unsigned budget_bits)
    : std::runtime_error("support too large: requires " + std::to_string(required_bits) + " seed bits, budget is " +
                         std::to_string(budget_bits)),
      required_(required_bits),
      budget_(budget_bits) {}

std::string construction_name(Construction c) {
  switch (c) {
    case Construction::polynomial: return "polynomial";
    case Construction::bch: return "bch";
    case Construction::small_bias: return "small_bias";
    case Construction::full: return "full";
  }
  return "unknown";
}

Construction construction_from_name(const std::string& name) {
  if (name == "polynomial") return Construction::polynomial;
  if (name == "bch") return Construction::bch;
  if (name == "small_bias") return Construction::small_bias;
  if (name == "full") return Construction::full;
  throw std::invalid_argument("unknown construction '" + name + "'");
}

unsigned ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return 64u - static_cast<unsigned>(std::countl_zero(x - 1));
}

unsigned kwise_seed_bits(std::size_t n, std::size_t k) { return static_cast<unsigned>(k) * std::max(1u, ceil_log2(n + 1)); }

unsigned bch_seed_bits(std::size_t n, std::size_t k) {
  return static_cast<unsigned>((k + 1) / 2) * std::max(1u, ceil_log2(n + 1));
}

unsigned almost_kwise_seed_bits(std::size_t n, std::size_t k, const Rational& delta) {
  const unsigned r = std::max(1u, ceil_log2(n + 1));
  const std::size_t len = ((k + 1) / 2) * r;
  return 2 * small_bias_degree(len, k, delta);
}

// ---------------------------------------------------------------- builders

SampleSpace build_kwise(std::size_t n, std::size_t k, const BuildOptions& opts) {
  if (n < 1 || k < 1) throw std::invalid_argument("build_kwise needs n >= 1 and k >= 1");
  const unsigned r = std::max(1u, ceil_log2(n + 1));
  check_budget(static_cast<unsigned>(k) * r, opts);
  SampleSpace s;
  s.params_ = {n, k, 0, 1, false};
  s.kind_ = Construction::polynomial;
  s.base_n_ = n;
  s.base_k_ = k;
  s.code_field_ = BinaryField(r);
  s.inner_bits_ = static_cast<unsigned>(k) * r;
  auto pts = evaluation_points(s.code_field_, n);
  // Column (c, b): coefficient c set to x^b; output bit i = low bit of x^b * a_i^c.
  s.columns_.assign(s.inner_bits_, BitVec(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t apow = 1;
    for (std::size_t c = 0; c < k; ++c) {
      for (unsigned b = 0; b < r; ++b) {
        std::uint64_t v = s.code_field_.mul(std::uint64_t{1} << b, apow);
        if (v & 1u) s.columns_[c * r + b].set(i);
      }
      apow = s.code_field_.mul(apow, pts[i]);
    }
  }
  return s;
}

SampleSpace build_kwise_bch(std::size_t n, std::size_t k, const BuildOptions& opts) {
  if (n < 1 || k < 1) throw std::invalid_argument("build_kwise_bch needs n >= 1 and k >= 1");
  const unsigned r = std::max(1u, ceil_log2(n + 1));
  check_budget(bch_seed_bits(n, k), opts);
  SampleSpace s;
  s.params_ = {n, k, 0, 1, false};
  s.kind_ = Construction::bch;
  s.base_n_ = n;
  s.base_k_ = k;
  s.code_field_ = BinaryField(r);
  auto rows = bch_rows(s.code_field_, n, k);
  s.inner_bits_ = static_cast<unsigned>(rows[0].size());
  s.columns_.assign(s.inner_bits_, BitVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b : rows[i].ones()) s.columns_[b].set(i);
  return s;
}

SampleSpace build_full(std::size_t n, const BuildOptions& opts) {
  if (n < 1) throw std::invalid_argument("build_full needs n >= 1");
  check_budget(static_cast<unsigned>(std::min<std::size_t>(n, 4096)), opts);
  SampleSpace s;
  s.params_ = {n, n, 0, 1, false};
  s.kind_ = Construction::full;
  s.base_n_ = n;
  s.base_k_ = n;
  s.inner_bits_ = static_cast<unsigned>(n);
  s.columns_.assign(n, BitVec(n));
  for (std::size_t i = 0; i < n; ++i) s.columns_[i].set(i);
  return s;
}

SampleSpace build_kwise_compact(std::size_t n, std::size_t k, const BuildOptions& opts) {
  const unsigned poly = kwise_seed_bits(n, k);
  const unsigned bch = bch_seed_bits(n, k);
  const std::size_t full = n;
  if (full <= bch && full <= poly) {
    auto s = build_full(n, opts);
    s.params_.k = k;
    return s;
  }
  if (bch <= poly) return build_kwise_bch(n, k, opts);
  return build_kwise(n, k, opts);
}

SampleSpace build_almost_kwise(std::size_t n, std::size_t k, const Rational& delta, const BuildOptions& opts) {
  if (n < 1 || k < 1) throw std::invalid_argument("build_almost_kwise needs n >= 1 and k >= 1");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("build_almost_kwise needs 0 < delta < 1");
  const unsigned r = std::max(1u, ceil_log2(n + 1));
  const std::size_t len = ((k + 1) / 2) * r;
  const unsigned t = small_bias_degree(len, k, delta);
  check_budget(2 * t, opts);
  SampleSpace s;
  s.params_ = {n, k, delta, 1, false};
  s.kind_ = Construction::small_bias;
  s.base_n_ = n;
  s.base_k_ = k;
  s.code_field_ = BinaryField(r);
  s.bias_field_ = BinaryField(t);
  s.code_rows_ = bch_rows(s.code_field_, n, k);
  s.outer_bits_ = t;
  s.inner_bits_ = t;
  return s;
}

SpaceBuilder exact_builder(Construction c, const BuildOptions& opts) {
  return [c, opts](std::size_t n, std::size_t k, const Rational&) {
    switch (c) {
      case Construction::polynomial: return build_kwise(n, k, opts);
      case Construction::bch: return build_kwise_bch(n, k, opts);
      case Construction::full: {
        auto s = build_full(n, opts);
        return s;
      }
      case Construction::small_bias: break;
    }
    throw std::invalid_argument("small_bias is not an exact construction");
  };
}

SpaceBuilder almost_builder(const BuildOptions& opts) {
  return [opts](std::size_t n, std::size_t k, const Rational& delta) { return build_almost_kwise(n, k, delta, opts); };
}

SampleSpace with_dyadic_marginals(const SpaceBuilder& builder, const std::vector<unsigned>& exponents, std::size_t k,
                                  const Rational& delta, bool complemented) {
  if (exponents.empty()) throw std::invalid_argument("with_dyadic_marginals needs n >= 1");
  std::size_t total = 0;
  unsigned max_l = 0;
  for (unsigned l : exponents) {
    total += l;
    max_l = std::max(max_l, l);
  }
  SampleSpace base = builder(std::max<std::size_t>(total, 1), k * std::max(1u, max_l), delta);
  SampleSpace s = base;
  s.params_.n = exponents.size();
  s.params_.k = k;
  s.params_.delta = delta;
  s.params_.p_log_inv = max_l;
  s.params_.complemented = complemented;
  s.groups_ = exponents;
  s.complemented_ = complemented;
  return s;
}

SampleSpace with_marginal(const SpaceBuilder& builder, std::size_t n, std::size_t k, const Rational& delta, unsigned L,
                          bool complemented) {
  if (L < 1) throw std::invalid_argument("with_marginal needs L >= 1");
  if (L == 1 && !complemented) {
    SampleSpace s = builder(n, k, delta);
    return s;
  }
  return with_dyadic_marginals(builder, std::vector<unsigned>(n, L), k, delta, complemented);
}

// ---------------------------------------------------------------- generation

unsigned SampleSpace::marginal_exponent(std::size_t i) const { return groups_.empty() ? 1u : groups_.at(i); }

Rational SampleSpace::marginal(std::size_t i) const {
  Rational p = pow2(-static_cast<long>(marginal_exponent(i)));
  return complemented_ ? Rational(1) - p : p;
}

void SampleSpace::block_columns(std::uint64_t x, std::vector<BitVec>& cols) const {
  if (kind_ != Construction::small_bias) {
    cols = columns_;
    return;
  }
  // Bit i = <a_i(x), z> with a_i(x) = sum over set bits l of row i of x^l.
  const std::size_t len = code_rows_.empty() ? 0 : code_rows_[0].size();
  std::vector<std::uint64_t> powers(len);
  std::uint64_t p = 1;
  for (std::size_t l = 0; l < len; ++l) {
    powers[l] = p;
    p = bias_field_.mul(p, x);
  }
  cols.assign(inner_bits_, BitVec(base_n_));
  for (std::size_t i = 0; i < base_n_; ++i) {
    std::uint64_t a = 0;
    for (std::size_t l : code_rows_[i].ones()) a ^= powers[l];
    while (a) {
      unsigned b = static_cast<unsigned>(std::countr_zero(a));
      cols[b].set(i);
      a &= a - 1;
    }
  }
}

void SampleSpace::map_output(const BitVec& base, BitVec& out) const {
  if (groups_.empty() && !complemented_) {
    out = base;
    return;
  }
  if (out.size() != params_.n) out = BitVec(params_.n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < params_.n; ++i) {
    const unsigned len = groups_.empty() ? 1u : groups_[i];
    bool bit = true;
    for (unsigned j = 0; j < len && bit; ++j) bit = base.get(pos + j);
    pos += len;
    out.set(i, bit != complemented_);
  }
}

BitVec SampleSpace::generate(std::uint64_t seed) const {
  if (seed_bits() < 64 && seed >= support_size()) throw std::out_of_range("seed outside the support");
  const std::uint64_t x = seed >> inner_bits_;
  const std::uint64_t z = inner_bits_ >= 64 ? seed : (seed & ((std::uint64_t{1} << inner_bits_) - 1));
  std::vector<BitVec> cols;
  block_columns(x, cols);
  BitVec base(base_n_);
  for (unsigned b = 0; b < inner_bits_; ++b)
    if ((z >> b) & 1u) base ^= cols[b];
  BitVec out;
  map_output(base, out);
  return out;
}

SpaceCursor SampleSpace::enumerate(unsigned budget_bits) const {
  if (seed_bits() > budget_bits) throw SupportTooLarge(seed_bits(), budget_bits);
  return SpaceCursor(*this);
}

SampleSpace SampleSpace::complement() const {
  SampleSpace s = *this;
  s.complemented_ = !complemented_;
  s.params_.complemented = s.complemented_;
  return s;
}

SpaceCursor::SpaceCursor(const SampleSpace& space) : space_(&space), inner_bits_(space.inner_bits_) {}

void SpaceCursor::load_block() {
  space_->block_columns(x_, cols_);
  base_ = BitVec(space_->base_n_);
  j_ = 0;
}

bool SpaceCursor::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    load_block();
  } else {
    ++j_;
    if (j_ == (std::uint64_t{1} << inner_bits_)) {
      ++x_;
      if (x_ == (std::uint64_t{1} << space_->outer_bits_)) {
        done_ = true;
        return false;
      }
      load_block();
    } else {
      base_ ^= cols_[static_cast<std::size_t>(std::countr_zero(j_))];
    }
  }
  space_->map_output(base_, out_);
  return true;
}

std::uint64_t SpaceCursor::seed() const { return (x_ << inner_bits_) | gray(j_); }

// ---------------------------------------------------------------- descriptor

nlohmann::json SampleSpace::descriptor() const {
  nlohmann::json params = {{"n", params_.n},
                           {"k", params_.k},
                           {"delta", to_string(params_.delta)},
                           {"p_log_inv", params_.p_log_inv},
                           {"complemented", complemented_}};
  if (!groups_.empty()) params["groups"] = groups_;
  nlohmann::json base = {{"n", base_n_}, {"k", base_k_}};
  if (kind_ != Construction::full) {
    base["field_degree"] = code_field_.degree();
    base["field_modulus"] = code_field_.modulus();
  }
  if (kind_ == Construction::small_bias) {
    base["bias_degree"] = bias_field_.degree();
    base["bias_modulus"] = bias_field_.modulus();
    base["code_length"] = code_rows_.empty() ? 0 : code_rows_[0].size();
  }
  return {{"construction", construction_name(kind_)},
          {"params", params},
          {"base", base},
          {"seed_bits", seed_bits()}};
}

SampleSpace SampleSpace::from_descriptor(const nlohmann::json& d) {
  const Construction kind = construction_from_name(d.at("construction").get<std::string>());
  const auto& p = d.at("params");
  const auto& b = d.at("base");
  BuildOptions opts;
  opts.max_seed_bits = d.at("seed_bits").get<unsigned>();
  const std::size_t bn = b.at("n").get<std::size_t>();
  const std::size_t bk = b.at("k").get<std::size_t>();
  const Rational delta = parse_rational(p.at("delta").get<std::string>());
  SampleSpace s;
  switch (kind) {
    case Construction::polynomial: s = build_kwise(bn, bk, opts); break;
    case Construction::bch: s = build_kwise_bch(bn, bk, opts); break;
    case Construction::full: s = build_full(bn, opts); break;
    case Construction::small_bias: s = build_almost_kwise(bn, bk, delta, opts); break;
  }
  if (kind != Construction::full && b.at("field_modulus").get<std::uint64_t>() != s.code_field_.modulus())
    throw std::invalid_argument("descriptor field modulus does not match");
  if (kind == Construction::small_bias && b.at("bias_modulus").get<std::uint64_t>() != s.bias_field_.modulus())
    throw std::invalid_argument("descriptor bias modulus does not match");
  s.params_.n = p.at("n").get<std::size_t>();
  s.params_.k = p.at("k").get<std::size_t>();
  s.params_.delta = delta;
  s.params_.p_log_inv = p.at("p_log_inv").get<unsigned>();
  s.complemented_ = p.at("complemented").get<bool>();
  s.params_.complemented = s.complemented_;
  if (p.contains("groups")) s.groups_ = p.at("groups").get<std::vector<unsigned>>();
  if (s.groups_.empty() && s.params_.n != bn) throw std::invalid_argument("descriptor size mismatch");
  if (s.seed_bits() != d.at("seed_bits").get<unsigned>()) throw std::invalid_argument("descriptor seed_bits mismatch");
  return s;
}

std::vector<std::uint64_t> sample_seeds(const SampleSpace& space, std::size_t count, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  const unsigned bits = space.seed_bits();
  std::vector<std::uint64_t> out(count);
  for (auto& s : out) {
    std::uint64_t v = rng();
    s = bits >= 64 ? v : (v >> (64 - bits));
  }
  return out;
}

// ---------------------------------------------------------------- verification

namespace {

using Subset = std::vector<std::size_t>;

class OnesCounter {
 public:
  OnesCounter(std::vector<BitVec> cols, std::uint64_t support) : cols_(std::move(cols)), support_(support) {}

  // Number of support vectors whose bits on t are all 1.
  std::uint64_t all_ones(const Subset& t) {
    if (t.empty()) return support_;
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    const std::size_t words = cols_[t[0]].word_count();
    std::uint64_t c = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t acc = cols_[t[0]].data()[w];
      for (std::size_t j = 1; j < t.size() && acc; ++j) acc &= cols_[t[j]].data()[w];
      c += static_cast<std::uint64_t>(std::popcount(acc));
    }
    memo_.emplace(t, c);
    return c;
  }

 private:
  std::vector<BitVec> cols_;
  std::uint64_t support_;
  std::map<Subset, std::uint64_t> memo_;
};

Rational subset_tv(const SampleSpace& space, const Subset& s, OnesCounter& counter, std::uint64_t support) {
  const std::size_t q = s.size();
  std::vector<std::uint64_t> c1(std::size_t{1} << q);
  for (std::size_t mask = 0; mask < c1.size(); ++mask) {
    Subset t;
    for (std::size_t j = 0; j < q; ++j)
      if ((mask >> j) & 1u) t.push_back(s[j]);
    c1[mask] = counter.all_ones(t);
  }
  unsigned total_l = 0;
  for (auto i : s) total_l += space.marginal_exponent(i);
  BigInt denom = 1;
  denom <<= total_l;
  BigInt sum = 0;
  for (std::size_t a = 0; a < c1.size(); ++a) {
    // exact count of pattern a via inclusion-exclusion over supersets within s
    long long cnt = 0;
    for (std::size_t t = 0; t < c1.size(); ++t) {
      if ((t & a) != a) continue;
      const int extra = std::popcount(t & ~a);
      cnt += (extra % 2 ? -1 : 1) * static_cast<long long>(c1[t]);
    }
    // reference numerator over 2^total_l: ones have weight 1, zeros 2^L - 1 (swapped if complemented)
    BigInt ref = 1;
    for (std::size_t j = 0; j < q; ++j) {
      const unsigned l = space.marginal_exponent(s[j]);
      BigInt lo = 1;
      BigInt hi = (BigInt(1) << l) - 1;
      if (space.complemented()) std::swap(lo, hi);
      const bool one = (a >> j) & 1u;
      ref *= one ? lo : hi;
    }
    BigInt diff = BigInt(cnt) * denom - BigInt(support) * ref;
    sum += diff < 0 ? BigInt(-diff) : diff;
  }
  return Rational(sum, BigInt(2) * BigInt(support) * denom);
}

bool next_combination(Subset& c, std::size_t n) {
  const std::size_t q = c.size();
  for (std::size_t i = q; i-- > 0;) {
    if (c[i] < n - q + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < q; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

IndependenceReport verify_independence(const SampleSpace& space, std::size_t k_check, std::size_t subset_cap,
                                       unsigned budget_bits) {
  if (k_check < 1) throw std::invalid_argument("k_check must be >= 1");
  const std::size_t n = space.size();
  k_check = std::min(k_check, n);
  auto cur = space.enumerate(budget_bits);
  const std::uint64_t support = space.support_size();
  std::vector<BitVec> cols(n, BitVec(support));
  std::uint64_t idx = 0;
  while (cur.next()) {
    const BitVec& v = cur.vector();
    for (std::size_t w = 0; w < v.word_count(); ++w) {
      std::uint64_t bits = v.data()[w];
      while (bits) {
        cols[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))].set(idx);
        bits &= bits - 1;
      }
    }
    ++idx;
  }
  OnesCounter counter(std::move(cols), support);

  BigInt total = 0;
  for (std::size_t q = 1; q <= k_check; ++q) total += binomial(n, q);
  const bool exhaustive = subset_cap == 0 || total <= subset_cap;

  IndependenceReport rep;
  rep.exhaustive = exhaustive;
  auto consider = [&](const Subset& s) {
    Rational tv = subset_tv(space, s, counter, support);
    ++rep.subsets_tested;
    if (rep.subsets_tested == 1 || tv > rep.max_tv) {
      rep.max_tv = tv;
      rep.worst_subset = s;
    }
  };
  if (exhaustive) {
    for (std::size_t q = 1; q <= k_check; ++q) {
      Subset c(q);
      for (std::size_t j = 0; j < q; ++j) c[j] = j;
      do consider(c);
      while (next_combination(c, n));
    }
  } else {
    // Deterministic sample: each size gets a share proportional to its count.
    std::mt19937_64 rng(0x5eed);
    for (std::size_t q = 1; q <= k_check; ++q) {
      const BigInt share_big = (binomial(n, q) * subset_cap + total - 1) / total;
      const std::size_t share = static_cast<std::size_t>(std::min(share_big, binomial(n, q)));
      std::set<Subset> seen;
      while (seen.size() < share) {
        std::set<std::size_t> pick;
        while (pick.size() < q) pick.insert(static_cast<std::size_t>(rng() % n));
        Subset c(pick.begin(), pick.end());
        if (seen.insert(c).second) consider(c);
      }
    }
  }
  return rep;
}

nlohmann::json report_json(const IndependenceReport& r) {
  return {{"max_tv", rational_json(r.max_tv)},
          {"worst_subset", r.worst_subset},
          {"subsets_tested", r.subsets_tested},
          {"exhaustive", r.exhaustive}};
}

}  // namespace derand
