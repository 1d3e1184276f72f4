#pragma once

#include "graphkdv/evolution.hpp"
#include "graphkdv/graph_operator.hpp"
#include "graphkdv/profiles.hpp"

#include <complex>
#include <string>
#include <vector>

namespace graphkdv {

// L_e = -alpha d_x^2 - beta - 2 phi_e on every edge, second-order differences. The vertex value is a
// single unknown shared by all edges and the ghost values of the vertex stencils are eliminated with
// sum_e d_s u_e(0) = Z n u(0) (s the outward coordinate). Far ends are homogeneous Dirichlet.
//
// Reduced layout: [u(0), minus edges j = 1..m-2, plus edges j = 1..m-2].
struct LinearizedOperator {
  ProfileParams params;
  StarGraph graph;
  GraphGrid grid;
  GraphFunction profile;
  SpMat stiffness;       // symmetric
  Eigen::VectorXd mass;  // diagonal lumped mass: n h at the vertex, h elsewhere
  SpMat E;               // mass^{-1} stiffness

  int reduced_size() const { return static_cast<int>(mass.size()); }
  int index(Side side, int k, int j) const;  // j in 1..m-2
  Eigen::VectorXd reduce(const GraphFunction& f) const;  // vertex value averaged over edges
  GraphFunction expand(const Eigen::VectorXd& v) const;
  // Relative asymmetry of M^{1/2} E M^{-1/2}.
  double asymmetry() const;
  // Residual of the flux-sum condition for a nodal function, using second-order one-sided derivatives.
  double flux_sum_residual(const GraphFunction& f) const;
  double energy(const Eigen::VectorXd& v) const { return v.dot(stiffness * v); }
};

LinearizedOperator build_E(const ProfileParams& p, const GraphGrid& grid, const GraphFunction& profile);

struct NEOptions {
  VertexVariant variant = VertexVariant::AZ;
  bool with_sponge = false;
  DiscretizationOptions disc;  // sponge geometry; the variant field is overwritten
};

// -d_x L_e phi applied edgewise, i.e. alpha psi''' + beta psi' + 2 (phi psi)', on the SBP grid with the
// vertex conditions imposed by projection.
struct NEOperator {
  ProfileParams params;
  GraphDiscretization disc;
  Eigen::VectorXd phi;
  SpMat A;
  bool with_sponge = false;
};

NEOperator build_NE(const LinearizedOperator& E, const NEOptions& opt = {});
NEOperator build_NE(const ProfileParams& p, const GraphFunction& profile, const NEOptions& opt = {});

enum class ProfileSource { UZ, zero };

struct EigenOptions {
  double coarse_h = 0.2;         // grid of the dense eigensolve that supplies shifts
  double residual_tol = 1e-8;    // relative to ||psi||
  double ladder_tol = 5e-4;      // relative agreement of lambda(h) and lambda(h/2)
  double imag_tol = 1e-6;        // |Im| < imag_tol (1 + |Re|) counts as real
  double floor = 1e-6;           // Re lambda must exceed this
  int max_iter = 100;
  ProfileSource source = ProfileSource::UZ;
  NEOptions ne;
};

struct SpectralResult {
  std::vector<std::complex<double>> eigenvalues;  // dense spectrum on the coarse grid
  bool found = false;
  double lambda = 0.0;       // on grid h
  double lambda_half = 0.0;  // on grid h/2
  double ladder_rel_diff = 0.0;
  bool ladder_converged = false;
  double residual = 0.0;     // ||A psi - lambda psi|| / ||psi|| on grid h
  Eigen::VectorXd psi;       // packed on disc of grid h, unit H-norm, positive at the vertex
  GraphFunction psi_function;
  double h = 0.0;
  double L = 0.0;
  int coarse_real_positive = 0;  // multiplicity diagnostic
  double conjugate_pairing = 0.0;     // max distance from each eigenvalue's conjugate to the spectrum
  double hamiltonian_symmetry = 0.0;  // same for -conj, on eigenvalues with |lambda| < 10
  std::string message;
};

// Real unstable eigenvalue of NE on the grid (L, h) and h/2. The coarse dense spectrum supplies the
// shifts; every real positive candidate is refined by shift-invert iteration.
SpectralResult unstable_eigenpair(const ProfileParams& p, const StarGraph& graph, const GraphGrid& grid,
                                  const EigenOptions& opt = {});

// Dense spectrum of a sparse operator restricted to the range of the projection of its discretization.
std::vector<std::complex<double>> dense_spectrum(const NEOperator& ne);

// Crank-Nicolson for dV/dt = NE V on the given uniform times (starting at 0).
GraphField linearized_flow(const GraphFunction& psi0, const NEOperator& ne, const std::vector<double>& times);

// Newton iteration for P(alpha Dx^3 u + beta Dx u + Dx(u^2) - sponge u) = 0 in ker C, starting at guess.
struct SteadyState {
  Eigen::VectorXd u;
  double residual = 0.0;
  int iterations = 0;
  double distance = 0.0;  // H1 distance from the (projected) guess
};
SteadyState discrete_steady_state(const GraphDiscretization& disc, double alpha, double beta, const Eigen::VectorXd& guess,
                                  bool with_sponge, double tol = 1e-12, int max_iter = 20);

enum class PerturbationDirection { unstable, stable_control };

struct InstabilityOptions {
  double delta = 1e-4;  // relative to ||U_Z||_{H^1}
  double T = 0.0;       // 0: 1.2 ln(10) / lambda
  double dt = 0.01;
  int store_every = 5;
  PerturbationDirection direction = PerturbationDirection::unstable;
  double control_frequency = 1.0;  // stable_control: eigenvector of NE nearest i * control_frequency
  bool refine_base = true;  // start from the discrete steady state nearest U_Z instead of U_Z itself
  EigenOptions eigen;
  FdOptions fd;  // T, dt and store_every are taken from above
};

struct GrowthFit {
  std::vector<double> times;
  std::vector<double> deviations;  // ||u(t) - base||_{H^1(G)}
  double t_a = 0.0;
  double t_b = 0.0;
  int window_points = 0;
  double lambda_fit = 0.0;
  double r_squared = 0.0;
  double lambda = 0.0;  // eigenvalue on the experiment grid
  double ratio = 0.0;   // lambda_fit / lambda
  double initial_deviation = 0.0;
  double base_drift = 0.0;  // H1 distance between U_Z and the discrete steady state used as base
  bool blew_up = false;
  bool ok = false;
  std::string message;
};

// Least-squares fit of log(deviation) on the window t >= max(t_min, 2 dt) with deviation < 10 x initial.
GrowthFit fit_growth(const std::vector<double>& times, const std::vector<double>& deviations, double dt);

GrowthFit instability_experiment(const ProfileParams& p, const StarGraph& graph, const GraphGrid& grid,
                                 const InstabilityOptions& opt = {});

struct ConsistencyOptions {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double T = 1.0;
  double dt = 0.01;
  bool refine_steady = true;  // replace phi by the Newton-refined discrete steady state near it
  NEOptions ne = {VertexVariant::AZ, true, {}};  // both flows keep the far-end sponge
};

struct ConsistencyReport {
  std::vector<double> eps;
  std::vector<double> D;
  double slope = 0.0;
  double cosine = 0.0;  // direction of the smallest-eps difference quotient against V(T)
  bool ok = false;      // slope within [0.8, 1.2]
};

// D(eps) = || (Flow(phi + eps psi)(T) - Flow(phi)(T)) / eps - V_psi(T) ||_{H^1}, with Flow the CN
// solver and V the linearized flow about phi.
ConsistencyReport linearization_consistency(const ProfileParams& p, const GraphFunction& phi, const GraphFunction& psi,
                                            const ConsistencyOptions& opt = {});

}  // namespace graphkdv
