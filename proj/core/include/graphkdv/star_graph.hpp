#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace graphkdv {

enum class Side { minus, plus };

const char* to_string(Side s);

struct StarGraph {
  int n_minus = 1;
  int n_plus = 1;

  StarGraph() = default;
  StarGraph(int n_minus, int n_plus);  // throws unless balanced and >= 1

  int pairs() const { return n_plus; }
  int edge_count() const { return n_minus + n_plus; }
};

struct GraphGrid {
  double L = 0.0;
  double h = 0.0;
  int m = 0;

  GraphGrid() = default;
  GraphGrid(double L, int m);
  // Picks m so that (m-1) h == L; h must divide L up to 1e-9 relative.
  static GraphGrid with_step(double L, double h);

  // Physical coordinate of node j on an edge of the given side.
  double x(Side side, int j) const { return side == Side::plus ? j * h : -j * h; }
};

// Samples on every edge, stored from the vertex outward.
struct GraphFunction {
  StarGraph graph;
  GraphGrid grid;
  std::vector<Eigen::VectorXd> minus;
  std::vector<Eigen::VectorXd> plus;

  GraphFunction() = default;
  GraphFunction(const StarGraph& g, const GraphGrid& grid, double fill = 0.0);

  const Eigen::VectorXd& edge(Side s, int k) const { return s == Side::plus ? plus[k] : minus[k]; }
  Eigen::VectorXd& edge(Side s, int k) { return s == Side::plus ? plus[k] : minus[k]; }

  void validate() const;
  double max_abs() const;
};

GraphFunction operator+(const GraphFunction& a, const GraphFunction& b);
GraphFunction operator-(const GraphFunction& a, const GraphFunction& b);
GraphFunction operator*(double s, const GraphFunction& a);

struct VertexTraces {
  Eigen::VectorXd u0_minus, u0_plus;
  Eigen::VectorXd u1_minus, u1_plus;
  Eigen::VectorXd u2_minus, u2_plus;
  int stencil_order = 4;
};

// One-sided values and x-derivatives at the vertex for every edge.
VertexTraces vertex_traces(const GraphFunction& f, int stencil_order = 4);

enum class CompatTier { none, s_1_to_3half, s_3half_to_5half, s_above_5half };
const char* to_string(CompatTier t);

struct DomainCheck {
  bool ok = false;
  double continuity = 0.0;
  double first_jump = 0.0;
  double second_jump = 0.0;
};

// Residuals of the three vertex conditions, maximized over edge pairs.
// Continuity also covers agreement across different pairs.
DomainCheck vertex_condition_residuals(const GraphFunction& f, double Z, int stencil_order = 4);

CompatTier compat_class(const GraphFunction& f, double Z, double tol, int stencil_order = 4);
DomainCheck check_domain_AZ(const GraphFunction& f, double Z, double tol, int stencil_order = 4);

// x-derivative on every edge: centered inside, second-order one-sided at the ends.
GraphFunction derivative(const GraphFunction& f);

// Trapezoidal L2(G) inner product.
double inner_product(const GraphFunction& u, const GraphFunction& v);
double sobolev_norm(const GraphFunction& f, int s);

void write_csv(std::ostream& os, const GraphFunction& f);
GraphFunction read_csv(std::istream& is);

}  // namespace graphkdv
