#pragma once

#include "graphkdv/evolution.hpp"

#include <vector>

namespace graphkdv {

struct PicardOptions {
  double T = 0.25;
  double dt = 0.005;
  int max_iter = 30;
  double tol = 1e-10;       // stop when the successive difference falls below tol * (1 + norm)
  bool nonlinear = true;
  bool psi_prefactor = false;  // scale the nonlinearity by 1/T^2, the literal psi_T normalization
  double compat_tol = 1e-4;
  IbvpOptions ibvp;
};

struct PicardReport {
  int iterations = 0;
  std::vector<double> differences;  // sup_t L2(G) norm of successive differences
  std::vector<double> ratios;       // differences[i] / differences[i-1]
  bool converged = false;
  bool divergent = false;
};

struct PicardResult {
  GraphField field;
  PicardReport report;
};

// Fixed point of the integral map: free group plus Duhamel term of the nonlinearity on each
// half-line, corrected by boundary potentials solving the vertex trace system, iterated on [0, T].
// The first iterate is the linear group.
PicardResult picard_solve(const GraphFunction& u0, double Z, double alpha, double beta, const PicardOptions& opt);

}  // namespace graphkdv
