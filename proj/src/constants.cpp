#include "derand/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace derand {

namespace {

double log2m(std::size_t m) { return std::log2(static_cast<double>(std::max<std::size_t>(m, 2))); }

unsigned ceil_nonneg(double x) { return static_cast<unsigned>(std::max(0.0, std::ceil(x - 1e-12))); }

}  // namespace

Constants Constants::asymptotic() {
  Constants c;
  c.preset = "asymptotic";
  c.girth_mult = 20;
  c.kappa = 1;
  c.k_girth_mult = 10;
  c.girth_delta_exp = 100;
  c.k_cut_mult = 1;
  c.c_cyc = 200;
  c.cyc_delta_exp = 500;
  c.cyc_k_mult = 2;
  c.c_cut = 10 * c.kappa;
  c.cut_k_mult = 2;
  c.small_ell_cutoff = 100;
  c.window = 1.01;
  c.exact = Construction::polynomial;
  c.strict = true;
  return c;
}

Constants Constants::desk() { return Constants{}; }

unsigned Constants::log_ceil(double mult, std::size_t m) { return std::max(1u, ceil_nonneg(mult * log2m(m))); }

unsigned Constants::sweep_limit(MatroidKind kind, std::size_t m) const {
  return log_ceil(kind == MatroidKind::graphic ? girth_mult : kappa, m);
}

Rational Constants::girth_delta(std::size_t m) const { return pow2(-static_cast<long>(log_ceil(girth_delta_exp, m))); }

Rational Constants::cyc_delta(std::size_t m) const { return pow2(-static_cast<long>(log_ceil(cyc_delta_exp, m))); }

unsigned Constants::cyc_exponent(std::size_t ell, std::size_t m) const {
  return std::max(1u, ceil_nonneg(c_cyc * log2m(m) / static_cast<double>(ell)));
}

unsigned Constants::cut_exponent(std::size_t ell, std::size_t m) const {
  return std::max(1u, ceil_nonneg(c_cut * log2m(m) / static_cast<double>(ell)));
}

std::size_t Constants::window_top(std::size_t ell) const {
  return std::max<std::size_t>(ell, ceil_nonneg(window * static_cast<double>(ell)));
}

std::size_t Constants::next_ell(std::size_t ell) const { return std::max(ell + 1, window_top(ell)); }

nlohmann::json Constants::to_json() const {
  return {{"preset", preset},
          {"girth_mult", girth_mult},
          {"kappa", kappa},
          {"k_girth_mult", k_girth_mult},
          {"girth_delta_exp", girth_delta_exp},
          {"k_cut_mult", k_cut_mult},
          {"c_cyc", c_cyc},
          {"cyc_delta_exp", cyc_delta_exp},
          {"cyc_k_mult", cyc_k_mult},
          {"c_cut", c_cut},
          {"cut_k_mult", cut_k_mult},
          {"small_ell_cutoff", small_ell_cutoff},
          {"window", window},
          {"exact", construction_name(exact)},
          {"budget_bits", budget_bits},
          {"allow_sampling", allow_sampling},
          {"sample_count", sample_count},
          {"sample_seed", sample_seed},
          {"strict", strict}};
}

Constants Constants::from_json(const nlohmann::json& j) {
  const std::string name = j.value("preset", std::string("desk"));
  Constants c;
  if (name == "asymptotic")
    c = asymptotic();
  else if (name != "desk")
    throw std::invalid_argument("unknown constants preset '" + name + "'");
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    if (key == "girth_mult") c.girth_mult = value.get<double>();
    else if (key == "kappa") c.kappa = value.get<double>();
    else if (key == "k_girth_mult") c.k_girth_mult = value.get<double>();
    else if (key == "girth_delta_exp") c.girth_delta_exp = value.get<double>();
    else if (key == "k_cut_mult") c.k_cut_mult = value.get<double>();
    else if (key == "c_cyc") c.c_cyc = value.get<double>();
    else if (key == "cyc_delta_exp") c.cyc_delta_exp = value.get<double>();
    else if (key == "cyc_k_mult") c.cyc_k_mult = value.get<double>();
    else if (key == "c_cut") c.c_cut = value.get<double>();
    else if (key == "cut_k_mult") c.cut_k_mult = value.get<double>();
    else if (key == "small_ell_cutoff") c.small_ell_cutoff = value.get<std::size_t>();
    else if (key == "window") c.window = value.get<double>();
    else if (key == "exact") c.exact = construction_from_name(value.get<std::string>());
    else if (key == "budget_bits") c.budget_bits = value.get<unsigned>();
    else if (key == "allow_sampling") c.allow_sampling = value.get<bool>();
    else if (key == "sample_count") c.sample_count = value.get<std::size_t>();
    else if (key == "sample_seed") c.sample_seed = value.get<std::uint64_t>();
    else if (key == "strict") c.strict = value.get<bool>();
    else throw std::invalid_argument("unknown constants field '" + key + "'");
  }
  if (c.window < 1.0) throw std::invalid_argument("window must be at least 1");
  return c;
}

std::vector<std::string> Constants::substitutions() const {
  const nlohmann::json mine = to_json(), ref = asymptotic().to_json();
  std::vector<std::string> out;
  for (const auto& [key, value] : ref.items()) {
    if (key == "preset" || mine.at(key) == value) continue;
    out.push_back(key + ": asymptotic " + value.dump() + ", used " + mine.at(key).dump());
  }
  return out;
}

}  // namespace derand
