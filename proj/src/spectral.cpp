#include "derand/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace derand {

double ResistanceTable::max_leverage() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.leverage);
  return m;
}

const ResistanceRow& ResistanceTable::row_by_id(std::size_t id) const {
  for (const auto& r : rows)
    if (r.edge_id == id) return r;
  throw std::out_of_range("no resistance row for edge " + std::to_string(id));
}

LaplacianView laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  LaplacianView view;
  view.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
    view.matrix(u, u) += e.w;
    view.matrix(v, v) += e.w;
    view.matrix(u, v) -= e.w;
    view.matrix(v, u) -= e.w;
  }
  view.comps = components(g);
  return view;
}

Eigen::MatrixXd pseudoinverse(const Graph& g) {
  const LaplacianView view = laplacian(g);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(n, n);
  for (const auto& verts : view.comps.members()) {
    const auto s = static_cast<Eigen::Index>(verts.size());
    if (s == 1) continue;
    Eigen::MatrixXd block(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j) block(i, j) = view.matrix(verts[i], verts[j]);
    // (L + J/s)^-1 - J/s is the pseudoinverse of a connected Laplacian block.
    const double js = 1.0 / static_cast<double>(s);
    block.array() += js;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
    if (ldlt.info() != Eigen::Success) throw NumericalError("LDLT failed on Laplacian block");
    Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(s, s));
    inv.array() -= js;
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = 0; j < s; ++j) pinv(verts[i], verts[j]) = inv(i, j);
  }
  return pinv;
}

double effective_resistance(const Graph& g, std::size_t u, std::size_t v) {
  if (u >= g.vertex_count() || v >= g.vertex_count()) throw std::out_of_range("vertex out of range");
  const Components comps = components(g);
  if (comps.label[u] != comps.label[v]) throw std::invalid_argument("infinite resistance");
  if (u == v) return 0.0;
  const Eigen::MatrixXd p = pseudoinverse(g);
  return p(u, u) + p(v, v) - 2.0 * p(u, v);
}

long double schur_resistance(const Graph& g, std::size_t u, std::size_t v) {
  const Components comps = components(g);
  if (comps.label[u] != comps.label[v]) throw std::invalid_argument("infinite resistance");
  if (u == v) return 0.0L;
  std::vector<std::size_t> verts;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    if (comps.label[x] == comps.label[u]) verts.push_back(x);
  const std::size_t s = verts.size();
  std::vector<std::size_t> local(g.vertex_count(), kNoEdge);
  for (std::size_t i = 0; i < s; ++i) local[verts[i]] = i;
  std::vector<std::vector<long double>> c(s, std::vector<long double>(s, 0.0L));
  for (const auto& e : g.edges()) {
    if (local[e.u] == kNoEdge) continue;
    c[local[e.u]][local[e.v]] += e.w;
    c[local[e.v]][local[e.u]] += e.w;
  }
  std::vector<bool> gone(s, false);
  const std::size_t lu = local[u], lv = local[v];
  std::vector<std::size_t> nbrs;
  for (std::size_t x = 0; x < s; ++x) {
    if (x == lu || x == lv) continue;
    long double deg = 0.0L;
    nbrs.clear();
    for (std::size_t y = 0; y < s; ++y) {
      if (gone[y] || y == x || c[x][y] == 0.0L) continue;
      deg += c[x][y];
      nbrs.push_back(y);
    }
    gone[x] = true;
    if (deg == 0.0L) continue;
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        const long double add = c[x][nbrs[a]] * c[x][nbrs[b]] / deg;
        c[nbrs[a]][nbrs[b]] += add;
        c[nbrs[b]][nbrs[a]] += add;
      }
    }
  }
  if (c[lu][lv] <= 0.0L) throw NumericalError("schur elimination lost connectivity");
  return 1.0L / c[lu][lv];
}

namespace {

void check_sum_rule(const ResistanceTable& t, std::size_t n) {
  std::vector<double> sums(t.comps.count, 0.0);
  for (const auto& r : t.rows) sums[t.comps.label[r.u]] += r.leverage;
  std::vector<std::size_t> sizes(t.comps.count, 0);
  for (std::size_t v = 0; v < n; ++v) ++sizes[t.comps.label[v]];
  for (std::size_t c = 0; c < t.comps.count; ++c) {
    const double expect = static_cast<double>(sizes[c] - 1);
    if (std::abs(sums[c] - expect) > 1e-6 * std::max(1.0, expect))
      throw NumericalError("leverage sum check failed: component " + std::to_string(c) + " sums to " +
                           std::to_string(sums[c]) + ", expected " + std::to_string(expect));
  }
}

}  // namespace

ResistanceTable leverage_scores(const Graph& g, bool with_diameters) {
  ResistanceTable t;
  t.comps = components(g);
  const Eigen::MatrixXd p = pseudoinverse(g);
  for (const auto& e : g.edges()) {
    ResistanceRow r;
    r.edge_id = e.id;
    r.u = e.u;
    r.v = e.v;
    r.w = e.w;
    r.reff = p(e.u, e.u) + p(e.v, e.v) - 2.0 * p(e.u, e.v);
    r.leverage = e.w * r.reff;
    t.rows.push_back(r);
  }
  check_sum_rule(t, g.vertex_count());
  if (with_diameters) {
    t.component_rdiam.assign(t.comps.count, 0.0);
    const auto members = t.comps.members();
    for (std::size_t c = 0; c < members.size(); ++c) {
      double d = 0.0;
      for (std::size_t i = 0; i < members[c].size(); ++i)
        for (std::size_t j = i + 1; j < members[c].size(); ++j) {
          const auto a = members[c][i], b = members[c][j];
          d = std::max(d, p(a, a) + p(b, b) - 2.0 * p(a, b));
        }
      t.component_rdiam[c] = d;
    }
  }
  return t;
}

ResistanceTable leverage_scores_graded(const Graph& g) {
  ResistanceTable t;
  t.comps = components(g);
  std::map<std::pair<std::size_t, std::size_t>, long double> cache;
  for (const auto& e : g.edges()) {
    const auto key = std::minmax(e.u, e.v);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, schur_resistance(g, e.u, e.v)).first;
    ResistanceRow r;
    r.edge_id = e.id;
    r.u = e.u;
    r.v = e.v;
    r.w = e.w;
    r.reff = static_cast<double>(it->second);
    r.leverage = static_cast<double>(static_cast<long double>(e.w) * it->second);
    t.rows.push_back(r);
  }
  check_sum_rule(t, g.vertex_count());
  return t;
}

double resistance_diameter(const Graph& g, const std::vector<std::size_t>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("resistance_diameter of an empty vertex set");
  const Graph sub = induced_subgraph(g, vertices);
  if (components(sub).count != 1) throw std::invalid_argument("induced subgraph is disconnected");
  if (vertices.size() == 1) return 0.0;
  const Eigen::MatrixXd p = pseudoinverse(sub);
  double d = 0.0;
  const auto s = static_cast<Eigen::Index>(vertices.size());
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = i + 1; j < s; ++j) d = std::max(d, p(i, i) + p(j, j) - 2.0 * p(i, j));
  return d;
}

Eigen::VectorXd electric_potentials(const Graph& g, const Eigen::VectorXd& demand) {
  return pseudoinverse(g) * demand;
}

double flow_energy(const Graph& g, const Eigen::VectorXd& potentials) {
  double energy = 0.0;
  for (const auto& e : g.edges()) {
    const double d = potentials(static_cast<Eigen::Index>(e.u)) - potentials(static_cast<Eigen::Index>(e.v));
    energy += e.w * d * d;
  }
  return energy;
}

SparsifyRates rates_for_scale(const Graph& g, const ResistanceTable& table, double s) {
  SparsifyRates out;
  out.s = s;
  out.p.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) out.p.push_back(std::min(1.0, table.rows[i].leverage * s));
  return out;
}

SparsifyRates sparsify_rates(const Graph& g, const ResistanceTable& table, std::size_t k, double epsilon, double delta,
                             bool allow_override) {
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("sparsify_rates needs 0 < epsilon < 1");
  if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("sparsify_rates needs 0 < delta < 1/2");
  if (k < 1) throw std::invalid_argument("sparsify_rates needs k >= 1");
  const double n = static_cast<double>(g.vertex_count());
  std::vector<std::string> dev;
  if (k % 2 != 0) dev.push_back("k=" + std::to_string(k) + " is odd");
  if (static_cast<double>(k) > std::log2(n)) dev.push_back("k=" + std::to_string(k) + " exceeds log2(n)");
  if (!dev.empty() && !allow_override) throw std::invalid_argument("sparsify_rates hypotheses violated: " + dev.front());
  const double s = 18.0 * std::numbers::e * std::log(n) / (epsilon * epsilon) *
                   std::pow(n / delta, 2.0 / static_cast<double>(k));
  SparsifyRates out = rates_for_scale(g, table, s);
  out.deviations = std::move(dev);
  return out;
}

namespace {

// Orthonormal basis of the complement of the per-component all-ones vectors (Helmert contrasts).
Eigen::MatrixXd range_basis(const Components& comps, std::size_t n) {
  const auto members = comps.members();
  const auto dim = static_cast<Eigen::Index>(n - comps.count);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), dim);
  Eigen::Index col = 0;
  for (const auto& verts : members) {
    for (std::size_t j = 1; j < verts.size(); ++j) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(j * (j + 1)));
      for (std::size_t i = 0; i < j; ++i) q(static_cast<Eigen::Index>(verts[i]), col) = scale;
      q(static_cast<Eigen::Index>(verts[j]), col) = -static_cast<double>(j) * scale;
      ++col;
    }
  }
  return q;
}

}  // namespace

ApproxCheck spectral_approx_check(const Graph& g, const Graph& h, double epsilon) {
  if (g.vertex_count() != h.vertex_count()) throw std::invalid_argument("graphs have different vertex sets");
  const Components cg = components(g);
  for (const auto& e : h.edges())
    if (cg.label[e.u] != cg.label[e.v]) throw std::invalid_argument("h not supported on g's components");
  ApproxCheck out;
  const std::size_t n = g.vertex_count();
  if (n == cg.count) {
    out.pass = true;
    out.min_ratio = out.max_ratio = 1.0;
    return out;
  }
  const Eigen::MatrixXd q = range_basis(cg, n);
  const Eigen::MatrixXd a = q.transpose() * laplacian(g).matrix * q;
  const Eigen::MatrixXd b = q.transpose() * laplacian(h).matrix * q;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky failed on restricted Laplacian");
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd x = l.triangularView<Eigen::Lower>().solve(b);
  Eigen::MatrixXd c = l.triangularView<Eigen::Lower>().solve(x.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen solver failed");
  out.min_ratio = eig.eigenvalues().minCoeff();
  out.max_ratio = eig.eigenvalues().maxCoeff();
  const double tol = 1e-9;
  out.pass = out.min_ratio >= 1.0 - epsilon - tol && out.max_ratio <= 1.0 + epsilon + tol;
  return out;
}

void write_resistance_csv(const ResistanceTable& t, std::ostream& out) {
  out << "edge_index,u,v,w,Reff,leverage\n";
  char buf[256];
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.17g,%.17g,%.17g\n", r.edge_id + 1, r.u + 1, r.v + 1, r.w, r.reff,
                  r.leverage);
    out << buf;
  }
}

}  // namespace derand
