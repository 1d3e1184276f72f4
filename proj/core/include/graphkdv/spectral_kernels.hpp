#pragma once

#include <complex>
#include <vector>

namespace graphkdv {

using cplx = std::complex<double>;

struct RootTriple {
  double tau = 0.0;
  double beta = 0.0;
  cplx r0, r1, r2;
  double p = 0.0;
  double q = 0.0;
  double k_beta = 0.0;
  double eps = 0.0;  // regularization used before extrapolation
};

// Three roots of z^3 + beta z + c = 0 (Cardano, Newton polished).
std::vector<cplx> depressed_cubic_roots(double beta, cplx c);

// Limit eps -> 0+ of the roots of z^3 + beta z + eps + i tau, labelled so that
// Re r0 <= 0 <= Re r1, Re r2 with r2 = i k_beta(tau).
RootTriple cubic_roots_limit(double tau, double beta, double eps = 1e-8);

// Roots of z^3 + beta z + sigma + i tau at a fixed sigma > 0 (no extrapolation), same labels.
RootTriple cubic_roots_damped(double tau, double beta, double sigma);

// Real xi with xi^3 - beta xi = tau (beta < 0).
double k_beta_inverse(double tau, double beta);

struct RootBoundsReport {
  double c_upper = 0.0;     // smallest c with |r_j| <= c (|tau|^{1/3} + |beta|^{1/2}) on the grid
  long violations = 0;      // grid points violating the bound with c_check
  double c_check = 2.0;
  double c_lower_p = 0.0;   // largest c with p >= c (|tau|^{1/3} + |beta|^{1/2})
  double q_min = 0.0;       // min |q| over the grid
  double q_min_location = 0.0;
  double p_min = 0.0;
};

RootBoundsReport probe_root_bounds(double beta, const std::vector<double>& tau_grid, double c_check = 2.0);

// Vieta residuals scaled by 1 + |tau|: sum, pair sum, product.
double vieta_residual(const RootTriple& r);

}  // namespace graphkdv
