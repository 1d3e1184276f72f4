#pragma once

#include "graphkdv/graph_operator.hpp"
#include "graphkdv/halfline_potentials.hpp"
#include "graphkdv/star_graph.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace graphkdv {

// Periodic line samples (n a power of two, y_i = (i - n/2) dy) over a uniform time grid.
struct LineField {
  double dy = 1.0;
  double t0 = 0.0;
  double dt = 1.0;
  Eigen::MatrixXd values;  // n x nt

  int n() const { return static_cast<int>(values.rows()); }
  int nt() const { return static_cast<int>(values.cols()); }
};

// S(t) phi: multiply the spectrum by exp(i t (xi^3 - beta xi)).
Eigen::VectorXd airy_group(const Eigen::VectorXd& phi, double dy, double t, double beta);
// Largest |phi| over the outer `fraction` of the periodic grid on either side.
double boundary_mass(const Eigen::VectorXd& phi, double fraction = 0.05);
// K w(t) = int_0^t S(t - t') w(t') dt', exact exponential weights for w linear on each step.
LineField duhamel_K(const LineField& w, double beta);

// The graph solvers integrate u_t = alpha u_xxx + beta u_x + 2 u u_x.
struct GraphField {
  double Z = 0.0;
  double alpha = 1.0;
  double beta = -1.0;
  std::string convention = "u_t = alpha u_xxx + beta u_x + 2 u u_x";
  std::vector<double> times;
  std::vector<GraphFunction> states;
  std::vector<double> l2_norms;
  // largest residual of the three vertex conditions at each stored time, as seen by the solver
  std::vector<double> vertex_residuals;
  bool blew_up = false;
  double stop_time = 0.0;
};

struct GroupOptions {
  IbvpOptions ibvp;
  double compat_tol = 1e-4;  // continuity and flux mismatch allowed in u0 (order-4 stencils)
};

// Linear group of the vertex-coupled problem on uniform times 0, dt, ..., evaluated through free
// whole-line evolution plus boundary potentials whose data solve the 3x3 trace system per frequency.
GraphField graph_group(const GraphFunction& u0, const std::vector<double>& times, double Z, double beta, double alpha,
                       const GroupOptions& opt = {});

struct FdOptions {
  double T = 1.0;
  double dt = 0.01;
  int store_every = 1;
  bool nonlinear = true;
  bool sponge = true;
  DiscretizationOptions disc;
  double inner_tol = 1e-13;
  int max_inner = 50;
  double blowup_factor = 1e6;
};

struct FdResult {
  GraphField field;
  double initial_projection = 0.0;  // H-norm of the change made by projecting u0 onto the constraints
  int steps = 0;
  int max_inner_iterations = 0;
};

// Crank-Nicolson on the SBP discretization with vertex and far-end conditions imposed by projection.
FdResult fd_solve(const GraphFunction& u0, double Z, double alpha, double beta, const FdOptions& opt);

// Finite-difference oracles for w_t + w_yyy + beta w_y = 0 on a half-line, Crank-Nicolson with the
// step of the boundary series; second order in h with dt proportional to h.
// Right: y in [0, L], w(0,t) = f(t). Left: y in [-L, 0], w(0,t) = g(t), w_y(0,t) = hb(t).
SpaceTimeField halfline_fd_right(const Eigen::VectorXd& v0, double h, const TimeSeries& f, double beta);
SpaceTimeField halfline_fd_left(const Eigen::VectorXd& w0, double h, const TimeSeries& g, const TimeSeries& hb,
                                double beta);

// Traveling wave of u_t = alpha u_xxx + beta u_x + 2 u u_x moving left with speed c (c > beta).
double traveling_wave(double alpha, double beta, double c, double x, double t);

}  // namespace graphkdv
