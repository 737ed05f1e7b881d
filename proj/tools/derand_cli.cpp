#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "derand/basisfind.hpp"
#include "derand/constants.hpp"
#include "derand/experiments.hpp"
#include "derand/generators.hpp"
#include "derand/reweight.hpp"
#include "derand/samplespace.hpp"
#include "derand/spectral.hpp"

using namespace derand;

namespace {

struct GraphArgs {
  std::string file;
  std::string family;
  std::string params;
};

struct SpaceArgs {
  std::size_t k = 2;
  std::string delta = "0";
  unsigned marginal_l = 1;
  bool complement = false;
  std::string construction = "bch";
};

struct RunArgs {
  unsigned budget = kDefaultBudgetBits;
  std::optional<std::size_t> sample;
  std::uint64_t sample_seed = 0x5eed;
  std::string out;
};

void add_graph_options(CLI::App* app, GraphArgs& g) {
  app->add_option("--graph", g.file, "Graph file (.json or edge list)");
  app->add_option("--family", g.family, "Generator family")->check(CLI::IsMember(family_names()));
  app->add_option("--params", g.params, "Family parameters, e.g. n=8,s=2,seed=3");
}

void add_space_options(CLI::App* app, SpaceArgs& s) {
  app->add_option("--k", s.k, "Independence order")->check(CLI::PositiveNumber);
  app->add_option("--delta", s.delta, "Closeness (rational, 0 = exact)");
  app->add_option("--marginal-L", s.marginal_l, "Marginal 2^-L")->check(CLI::PositiveNumber);
  app->add_flag("--complement", s.complement, "Marginal 1 - 2^-L");
  app->add_option("--construction", s.construction, "Exact construction")
      ->check(CLI::IsMember({"polynomial", "bch", "full"}));
}

void add_run_options(CLI::App* app, RunArgs& r) {
  app->add_option("--budget", r.budget, "Enumeration budget in seed bits")->check(CLI::Range(1u, 40u));
  app->add_option("--sample", r.sample, "Sample this many support points when over budget (not derandomized)");
  app->add_option("--sample-seed", r.sample_seed, "Seed for --sample");
  app->add_option("--out", r.out, "Write the JSON report here instead of stdout");
}

Graph load(const GraphArgs& a) {
  if (!a.file.empty() && !a.family.empty()) throw CLI::ValidationError("give either --graph or --family");
  if (!a.file.empty()) return load_graph(a.file);
  if (a.family.empty()) throw CLI::ValidationError("a graph is required (--graph or --family)");
  return gen_graph(a.family, FamilyParams::parse(a.params)).graph;
}

ExperimentOptions experiment_options(const RunArgs& r) {
  ExperimentOptions o;
  o.budget_bits = r.budget;
  o.sample = r.sample;
  o.sample_seed = r.sample_seed;
  return o;
}

SampleSpace make_space(std::size_t n, const SpaceArgs& s, const RunArgs& r) {
  BuildOptions bo;
  bo.max_seed_bits = r.sample ? 62 : r.budget;
  const Rational delta = parse_rational(s.delta);
  if (delta < 0) throw CLI::ValidationError("--delta must be non-negative");
  const SpaceBuilder b = delta == 0 ? exact_builder(construction_from_name(s.construction), bo) : almost_builder(bo);
  return with_marginal(b, n, s.k, delta, s.marginal_l, s.complement);
}

void emit(const nlohmann::json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << "\n";
}

EdgeSet parse_ids(const std::string& text) {
  EdgeSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long long v = std::stoll(item);
    if (v < 1) throw CLI::ValidationError("edge indices are 1-based");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derandomized sampling for graphs and graphic matroids"};
  app.require_subcommand(1);

  GraphArgs ga;
  SpaceArgs sa;
  RunArgs ra;

  auto* gen = app.add_subcommand("gen", "Generate a graph and print its summary");
  add_graph_options(gen, ga);
  std::string gen_out;
  gen->add_option("--save", gen_out, "Write the graph (.json or edge list)");
  gen->add_option("--out", ra.out, "Write the summary here");

  auto* conn = app.add_subcommand("connectivity", "Fraction of support points keeping the graph connected");
  auto* cyc = app.add_subcommand("cyclefree", "Fraction of support points giving a forest with >= m/10 edges");
  auto* ucut = app.add_subcommand("unique-cut", "Unique survival of a window cut");
  auto* ucyc = app.add_subcommand("unique-cycle", "Unique survival of a window cycle");
  std::string target;
  std::size_t pick = 0;
  double window = 1.01;
  for (auto* sc : {conn, cyc, ucut, ucyc}) {
    add_graph_options(sc, ga);
    add_space_options(sc, sa);
    add_run_options(sc, ra);
  }
  for (auto* sc : {ucut, ucyc}) {
    sc->add_option("--target", target, "Comma-separated 1-based edge indices");
    sc->add_option("--pick", pick, "Index into the window objects when --target is absent");
    sc->add_option("--window", window, "Window factor");
  }

  auto* sp = app.add_subcommand("sparsify", "Spectral sparsification over a k-wise space");
  double eps = 0.5, sp_delta = 0.25;
  add_graph_options(sp, ga);
  add_run_options(sp, ra);
  sp->add_option("--k", sa.k, "Independence order")->check(CLI::PositiveNumber);
  sp->add_option("--eps", eps, "Approximation epsilon");
  sp->add_option("--delta", sp_delta, "Failure probability");
  sp->add_option("--construction", sa.construction, "Exact construction")
      ->check(CLI::IsMember({"polynomial", "bch", "full"}));

  auto* rw = app.add_subcommand("reweight", "Weighting with leverage at most O(1/min cut)");
  std::string csv;
  std::size_t rw_delta = 0;
  add_graph_options(rw, ga);
  rw->add_option("--delta-base", rw_delta, "Weight base (0 = automatic)");
  rw->add_option("--csv", csv, "Write per-edge levels and weights");
  rw->add_option("--out", ra.out, "Write the JSON report here");

  auto* pipe = app.add_subcommand("reweight-connectivity", "Reweight, then sample by leverage and test connectivity");
  std::vector<double> mults;
  add_graph_options(pipe, ga);
  add_run_options(pipe, ra);
  pipe->add_option("--k", sa.k, "Independence order")->check(CLI::PositiveNumber);
  pipe->add_option("--multipliers", mults, "Leverage multipliers");

  auto* fb = app.add_subcommand("find-basis", "Find a basis with the round-efficient algorithm");
  std::string kind = "graphic", constants_file, preset = "desk";
  bool check_windows = false;
  add_graph_options(fb, ga);
  fb->add_option("--kind", kind, "Matroid")->check(CLI::IsMember({"graphic", "cographic"}));
  fb->add_option("--constants", constants_file, "JSON file with constant overrides");
  fb->add_option("--preset", preset, "Constant preset")->check(CLI::IsMember({"desk", "asymptotic"}));
  fb->add_flag("--check-windows", check_windows, "Brute-force check after each window (small graphs)");
  fb->add_option("--out", ra.out, "Write the JSON report here");

  auto* vs = app.add_subcommand("verify-space", "Exact TV distance of a space to its product reference");
  std::size_t vs_n = 8, check_k = 0, cap = 0;
  vs->add_option("--n", vs_n, "Positions")->check(CLI::PositiveNumber);
  add_space_options(vs, sa);
  add_run_options(vs, ra);
  vs->add_option("--check-k", check_k, "Subset size to test (0 = k)");
  vs->add_option("--subset-cap", cap, "Test at most this many subsets (0 = all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const Generated g = ga.file.empty() ? gen_graph(ga.family, FamilyParams::parse(ga.params))
                                          : gen_graph("file", FamilyParams::parse("path=" + ga.file));
      if (!gen_out.empty()) save_graph(g.graph, gen_out);
      emit(g.summary(), ra.out);
    } else if (conn->parsed() || cyc->parsed()) {
      const Graph g = load(ga);
      const SampleSpace s = make_space(g.edge_count(), sa, ra);
      const ExperimentReport r = conn->parsed() ? connectivity_experiment(g, s, experiment_options(ra))
                                                : cyclefree_experiment(g, s, experiment_options(ra));
      emit(r.to_json(), ra.out);
    } else if (ucut->parsed() || ucyc->parsed()) {
      const Graph g = load(ga);
      EdgeSet t;
      if (!target.empty()) {
        t = parse_ids(target);
      } else {
        const auto objs = ucut->parsed() ? window_cuts(g, window) : window_cycles(g, window);
        if (pick >= objs.size())
          throw CLI::ValidationError("--pick " + std::to_string(pick) + " but only " + std::to_string(objs.size()) +
                                     " window objects");
        t = objs[pick];
      }
      const SampleSpace s = make_space(g.edge_count(), sa, ra);
      const ExperimentReport r = ucut->parsed() ? unique_cut_survival_experiment(g, t, s, experiment_options(ra))
                                                : unique_cycle_survival_experiment(g, t, s, experiment_options(ra));
      emit(r.to_json(), ra.out);
    } else if (sp->parsed()) {
      SparsifyOptions o;
      o.base = experiment_options(ra);
      o.exact = construction_from_name(sa.construction);
      emit(sparsify_experiment(load(ga), sa.k, eps, sp_delta, o).to_json(), ra.out);
    } else if (rw->parsed()) {
      const Graph g = load(ga);
      ReweightOptions o;
      o.delta = rw_delta;
      const WeightingResult r = reweight_min_cut(g, o);
      if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw std::runtime_error("cannot write " + csv);
        write_weighting_csv(g, r, f);
      }
      emit(weighting_json(r), ra.out);
    } else if (pipe->parsed()) {
      PipelineOptions o;
      o.base = experiment_options(ra);
      if (!mults.empty()) o.multipliers = mults;
      emit(reweight_then_connectivity(load(ga), sa.k, o).to_json(), ra.out);
    } else if (fb->parsed()) {
      Constants c = preset == "asymptotic" ? Constants::asymptotic() : Constants::desk();
      if (!constants_file.empty()) {
        std::ifstream f(constants_file);
        if (!f) throw std::runtime_error("cannot read " + constants_file);
        nlohmann::json j = nlohmann::json::parse(f);
        if (!j.contains("preset")) j["preset"] = preset;
        c = Constants::from_json(j);
      }
      OracleSession session(load(ga), kind_from_name(kind));
      FindOptions fo;
      fo.check_windows = check_windows;
      emit(find_basis(session, c, 0, fo).to_json(), ra.out);
    } else if (vs->parsed()) {
      const SampleSpace s = make_space(vs_n, sa, ra);
      IndependenceReport r = verify_independence(s, check_k ? check_k : sa.k, cap, ra.sample ? 62 : ra.budget);
      nlohmann::json j = report_json(r);
      j["space"] = s.descriptor();
      j["seed_bits"] = s.seed_bits();
      emit(j, ra.out);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const SupportTooLarge& e) {
    std::cerr << "error: " << e.what() << " (use --sample N for a non-derandomized estimate)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
