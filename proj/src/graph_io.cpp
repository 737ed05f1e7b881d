#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "derand/graph.hpp"

namespace derand {

namespace {

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string header;
  if (!next_line(header)) throw std::runtime_error("edge list: missing header");
  std::istringstream hs(header);
  std::size_t n = 0, m = 0;
  if (!(hs >> n >> m)) throw std::runtime_error("edge list: header must be 'n m'");
  std::vector<Graph::Input> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::string row;
    if (!next_line(row)) throw std::runtime_error("edge list: expected " + std::to_string(m) + " edges");
    std::istringstream rs(row);
    long long u = 0, v = 0;
    double w = 1.0;
    if (!(rs >> u >> v)) throw std::runtime_error("edge list: bad edge line '" + row + "'");
    if (!(rs >> w)) w = 1.0;
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n || static_cast<std::size_t>(v) > n)
      throw std::runtime_error("edge list: endpoint out of range in '" + row + "'");
    edges.push_back({static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1), w});
  }
  return Graph(n, edges);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const bool unit = g.unit_weights();
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) {
    out << (e.u + 1) << ' ' << (e.v + 1);
    if (!unit) out << ' ' << format_weight(e.w);
    out << '\n';
  }
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1, e.w});
  return {{"n", g.vertex_count()}, {"m", g.edge_count()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<Graph::Input> edges;
  for (const auto& e : j.at("edges")) {
    const std::size_t u = e.at(0).get<std::size_t>(), v = e.at(1).get<std::size_t>();
    if (u < 1 || v < 1 || u > n || v > n) throw std::runtime_error("graph json: endpoint out of range");
    edges.push_back({u - 1, v - 1, e.size() > 2 ? e.at(2).get<double>() : 1.0});
  }
  return Graph(n, edges);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  int c = in.peek();
  while (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
    in.get();
    c = in.peek();
  }
  if (c == '{') return graph_from_json(nlohmann::json::parse(in));
  return read_edge_list(in);
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    out << graph_to_json(g).dump(2) << '\n';
  else
    write_edge_list(g, out);
}

}  // namespace derand
