#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "derand/graph.hpp"

namespace derand {

struct LaplacianView {
  Eigen::MatrixXd matrix;
  Components comps;
};

struct ResistanceRow {
  std::size_t edge_id = 0;
  std::size_t u = 0, v = 0;
  double w = 1.0;
  double reff = 0.0;
  double leverage = 0.0;
};

struct ResistanceTable {
  std::vector<ResistanceRow> rows;       // graph edge order
  std::vector<double> component_rdiam;   // indexed by component label
  Components comps;

  double max_leverage() const;
  const ResistanceRow& row_by_id(std::size_t id) const;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LaplacianView laplacian(const Graph& g);

// Moore-Penrose pseudoinverse, kernel removed per component.
Eigen::MatrixXd pseudoinverse(const Graph& g);

double effective_resistance(const Graph& g, std::size_t u, std::size_t v);

// Effective resistance by eliminating every other vertex of the component with sign-free updates,
// which keeps full relative accuracy when weights span many orders of magnitude.
long double schur_resistance(const Graph& g, std::size_t u, std::size_t v);

ResistanceTable leverage_scores(const Graph& g, bool with_diameters = true);
// Same table computed with schur_resistance (no diameters).
ResistanceTable leverage_scores_graded(const Graph& g);

double resistance_diameter(const Graph& g, const std::vector<std::size_t>& vertices);

// Potentials p = L^+ b for a demand vector b summing to zero on each component.
Eigen::VectorXd electric_potentials(const Graph& g, const Eigen::VectorXd& demand);
double flow_energy(const Graph& g, const Eigen::VectorXd& potentials);

struct SparsifyRates {
  double s = 0.0;
  std::vector<double> p;  // graph edge order
  std::vector<std::string> deviations;
};

// s = 18e ln(n) / eps^2 * (n/delta)^(2/k); p = min(1, w R s).
SparsifyRates sparsify_rates(const Graph& g, const ResistanceTable& table, std::size_t k, double epsilon, double delta,
                             bool allow_override = false);
// p = min(1, w R s) for a caller-supplied s.
SparsifyRates rates_for_scale(const Graph& g, const ResistanceTable& table, double s);

struct ApproxCheck {
  bool pass = false;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

ApproxCheck spectral_approx_check(const Graph& g, const Graph& h, double epsilon);

void write_resistance_csv(const ResistanceTable& t, std::ostream& out);

}  // namespace derand
