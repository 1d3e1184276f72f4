#pragma once

#include "graphkdv/star_graph.hpp"

namespace graphkdv {

enum class ProfileKind { Bump, Tail };
const char* to_string(ProfileKind k);

struct ProfileParams {
  double alpha = 1.0;  // alpha_+ > 0
  double beta = -1.0;  // beta_+ < 0
  double Z = 1.0;      // nonzero, Z^2/4 < omega

  ProfileParams() = default;
  ProfileParams(double alpha, double beta, double Z);  // validates

  double omega() const { return -beta / alpha; }
  ProfileKind kind() const { return Z > 0 ? ProfileKind::Bump : ProfileKind::Tail; }
  // Shift a = artanh(Z / (2 sqrt(omega))).
  double shift() const;
  void validate() const;
};

// (3/2)(c-1) sech^2(sqrt(c-1)/2 xi)
double solitary_wave(double c, double xi);

double half_soliton(const ProfileParams& p, Side side, double x);
// Plus-edge profile and its first three x-derivatives at x >= 0.
double half_soliton_derivative(const ProfileParams& p, double x, int order);

double profile_vertex_value(const ProfileParams& p);
double profile_max_value(const ProfileParams& p);

GraphFunction build_UZ(const ProfileParams& p, const GraphGrid& grid, const StarGraph& graph);

// r = alpha f'' + beta f + f^2 by centered differences; end nodes are left at 0.
GraphFunction elliptic_residual(const GraphFunction& f, double alpha, double beta);

// 40/sqrt(omega): sech^2 tails drop below 1e-14 well inside this length.
double default_truncation_length(const ProfileParams& p);

}  // namespace graphkdv
