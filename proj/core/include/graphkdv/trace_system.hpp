#pragma once

#include "graphkdv/spectral_kernels.hpp"

#include <Eigen/Dense>

#include <vector>

namespace graphkdv {

struct TraceMatrix {
  double tau = 0.0;
  double Z = 0.0;
  Eigen::Matrix3cd M;
};

// Unknown ordering (h, f, g).
TraceMatrix build_M(const RootTriple& roots, double Z);

// Closed form Z^2/2 + q^2 + p^2 + 2p + i k_beta.
cplx det_M(const RootTriple& roots, double Z);
// Cofactor expansion of the assembled matrix.
cplx det_cofactor(const Eigen::Matrix3cd& M);
// Expansion that keeps every term: Z^2/2 + Z(r1 + r2 - r0) + r0^2 + r1 r2 - r0 r1 - r0 r2.
cplx det_M_expanded(const RootTriple& roots, double Z);

struct InverseEntries {
  cplx n1, n2;
  cplx a11, a21, a31, a12, a22, a32, a13, a23, a33;

  // Assemble the inverse pattern (1/n1)[[a11/n2, a12, a13], [a21/n2, a22, a23], [a31, a32, a33]].
  Eigen::Matrix3cd matrix() const;
};

// Closed-form inverse data for Z = 1.
InverseEntries closed_form_inverse(const RootTriple& roots);

struct BoundaryRHS {
  cplx F1, dF1, d2F1;
  cplx F2, dF2, d2F2;
};

Eigen::Vector3cd assemble_rhs(const BoundaryRHS& b, double Z);

struct BoundarySpectra {
  std::vector<cplx> h, f, g;
};

// Per-frequency LU solve of M (h, f, g) = rhs.
BoundarySpectra solve_boundary_data(const std::vector<BoundaryRHS>& rhs, const std::vector<double>& taus, double Z,
                                    double beta);
// Same solve through the Z = 1 closed-form expressions.
BoundarySpectra solve_boundary_data_closed_form(const std::vector<BoundaryRHS>& rhs, const std::vector<double>& taus,
                                                double beta);

struct Tec3Report {
  // sup over the grid of |ratio| * <tau>^{-exponent} for each of the nine ratios, in the order
  // a11/(n1 n2), a12/n1, a13/n1, a21/(n1 n2), a22/n1, a23/n1, a31/n1, a32/n1, a33/n1
  std::vector<double> constants;
  std::vector<double> exponents;
  double n1_lower = 0.0;  // inf |n1| / <tau>^{2/3}
  double n2_lower = 0.0;
  long violations = 0;    // non-finite ratios or constants above the cap
  double cap = 0.0;
};

Tec3Report probe_tec3_bounds(double beta, const std::vector<double>& taus, double cap = 1e3);

inline double bracket(double tau) { return std::sqrt(1.0 + tau * tau); }

}  // namespace graphkdv
