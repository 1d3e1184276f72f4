#pragma once

#include "graphkdv/star_graph.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace graphkdv {

using SpMat = Eigen::SparseMatrix<double>;

// Third vertex condition: the D(A_Z) jump relation, or continuity of u'' (energy domain).
enum class VertexVariant { AZ, energy };
const char* to_string(VertexVariant v);

struct DiscretizationOptions {
  VertexVariant variant = VertexVariant::AZ;
  double sponge_fraction = 0.15;  // sponge width as a fraction of L
  double sponge_strength = 2.0;   // peak damping rate, quadratic ramp
};

// Summation-by-parts discretization of the star graph. Each edge uses the fourth-order interior /
// second-order boundary first-derivative operator D with diagonal norm H, written in the outward
// coordinate s (d/dx = D on plus edges, -D on minus edges). Vertex and far-end conditions are rows
// of C; P is the H-orthogonal projection onto ker C, so P A P is skew in H whenever A is.
//
// Vector layout: minus edges, then plus edges, m nodes each from the vertex outward.
class GraphDiscretization {
 public:
  GraphDiscretization(const StarGraph& graph, const GraphGrid& grid, double Z, const DiscretizationOptions& opt = {});

  const StarGraph& graph() const { return graph_; }
  const GraphGrid& grid() const { return grid_; }
  double Z() const { return Z_; }
  const DiscretizationOptions& options() const { return opt_; }
  int size() const { return n_; }
  int offset(Side side, int k) const;

  const Eigen::VectorXd& norm_weights() const { return H_; }
  const SpMat& Dx() const { return Dx_; }
  const SpMat& Ds() const { return Ds_; }
  const SpMat& constraints() const { return C_; }
  const SpMat& projection() const { return P_; }
  const Eigen::VectorXd& sponge() const { return sponge_; }

  Eigen::VectorXd pack(const GraphFunction& f) const;
  GraphFunction unpack(const Eigen::VectorXd& v) const;

  // P (alpha Dx^3 + beta Dx - sponge) P
  SpMat linear_operator(double alpha, double beta, bool with_sponge) const;
  // P (alpha Dx^3 + beta Dx + 2 Dx diag(phi)) P, the linearization about phi
  SpMat linearized_operator(double alpha, double beta, const Eigen::VectorXd& phi) const;
  // P Dx(u^2)
  Eigen::VectorXd nonlinear_term(const Eigen::VectorXd& u) const;
  Eigen::VectorXd project(const Eigen::VectorXd& u) const { return P_ * u; }

  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double l2_norm(const Eigen::VectorXd& u) const;
  double h1_norm(const Eigen::VectorXd& u) const;
  // max |C u| with each row scaled by its coefficient magnitude
  double constraint_residual(const Eigen::VectorXd& u) const;

 private:
  StarGraph graph_;
  GraphGrid grid_;
  double Z_;
  DiscretizationOptions opt_;
  int n_ = 0;
  Eigen::VectorXd H_;
  SpMat Dx_, Ds_, C_, P_;
  Eigen::VectorXd row_scale_;
  Eigen::VectorXd sponge_;
};

// Edge blocks of the SBP operator; exposed for tests.
SpMat sbp_first_derivative(int m, double h);
Eigen::VectorXd sbp_norm(int m, double h);

}  // namespace graphkdv
