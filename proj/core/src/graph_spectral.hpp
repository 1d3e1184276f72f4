#pragma once

#include "graphkdv/evolution.hpp"

namespace graphkdv::detail {

struct CoupledHalfLines {
  Eigen::MatrixXd right, left;  // y >= 0 and y <= 0 fields, m x nt
  std::vector<double> residual;  // vertex conditions at each time, y picture
};

// Adds the boundary potentials that make the two evolutions satisfy the vertex conditions.
CoupledHalfLines couple_vertex(const HalfLineEvolution& right, const HalfLineEvolution& left, double h, double ds,
                               double beta_t, double Z, const IbvpOptions& opt);

void check_uniform_times(const std::vector<double>& times);
void check_symmetric(const GraphFunction& u0, double tol);

// Graph field from y-picture fields: u(x, t) = alpha w(-x, alpha t); minus edges <-> y >= 0.
GraphField to_graph_field(const GraphFunction& like, const Eigen::MatrixXd& right, const Eigen::MatrixXd& left,
                          const std::vector<double>& times, double Z, double alpha, double beta);

}  // namespace graphkdv::detail
