#pragma once

#include "graphkdv/evolution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphkdv {

struct BourgainWeights {
  double s = 1.0;
  double b = 7.0 / 16.0;
  double sigma = 0.55;
  double beta = -1.0;
  void validate() const;  // s >= 0, b in (0, 1/2), sigma in (1/2, 2/3)
};

// nu = (1 + |tau - xi^3 + beta xi|)^b + chi_{|xi| <= 1} (1 + |tau|)^sigma
double weight_nu(double xi, double tau, const BourgainWeights& w);
// gamma = (1 + |tau - xi^3 + beta xi|)^{-b} + chi_{|xi| <= 1} (1 + |tau|)^{sigma - 1}
double weight_gamma(double xi, double tau, const BourgainWeights& w);

// Weighted l2 sums of the space-time DFT of a line field, normalized so that unit weights give
// the discrete L2(dx dt) norm. The field is treated as periodic in x and t.
double bourgain_norm(const LineField& f, const BourgainWeights& w);
double dual_norm_Y(const LineField& f, const BourgainWeights& w);
double spacetime_l2(const LineField& f);

struct ProbeOptions {
  int samples = 64;
  std::uint64_t seed = 1;
  int nx = 256;
  double dy = 0.2;
  int nt = 256;
  double t_half = 2.56;  // time window [-t_half, t_half)
  double cap = 1e3;      // ratios above this count as violations
  bool psi_prefactor = false;
  std::vector<double> psi_T = {0.1, 0.15, 0.2, 0.3, 0.4, 0.6, 0.8};
};

struct ProbeStats {
  std::string name;
  int samples = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  long violations = 0;
};

struct ProbeReport {
  std::vector<ProbeStats> probes;  // group, duhamel, bilinear
  double psiT_slope = 0.0;         // log-log slope of ||psi_T f||_X against T
  double psiT_predicted = 0.0;     // 1/2 - sigma - s/3
};

// Empirical ratios for the group, Duhamel and bilinear estimates over seeded random smooth data.
ProbeReport estimate_probes(const BourgainWeights& w, const ProbeOptions& opt = {});

}  // namespace graphkdv
