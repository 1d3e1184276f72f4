#include "graphkdv/trace_system.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphkdv {

TraceMatrix build_M(const RootTriple& r, double Z) {
  if (Z == 0.0) throw std::invalid_argument("build_M: Z must be nonzero");
  TraceMatrix t;
  t.tau = r.tau;
  t.Z = Z;
  t.M << 1.0, -1.0, 0.0,
         r.r0, -Z, -1.0,
         r.r0 * r.r0, r.r1 * r.r2 - 0.5 * Z * Z, -(r.r1 + r.r2 + Z);
  return t;
}

cplx det_M(const RootTriple& r, double Z) {
  return cplx(0.5 * Z * Z + r.q * r.q + r.p * r.p + 2.0 * r.p, r.k_beta);
}

cplx det_cofactor(const Eigen::Matrix3cd& M) {
  return M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) - M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
         M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
}

cplx det_M_expanded(const RootTriple& r, double Z) {
  return 0.5 * Z * Z + Z * (r.r1 + r.r2 - r.r0) + r.r0 * r.r0 + r.r1 * r.r2 - r.r0 * r.r1 - r.r0 * r.r2;
}

Eigen::Matrix3cd InverseEntries::matrix() const {
  Eigen::Matrix3cd A;
  A << a11 / n2, a12, a13,
       a21 / n2, a22, a23,
       a31, a32, a33;
  return A / n1;
}

InverseEntries closed_form_inverse(const RootTriple& r) {
  const cplx r0 = r.r0, r1 = r.r1, r2 = r.r2;
  InverseEntries e;
  e.n1 = 2.0 * r0 * r0 - 2.0 * r0 * r1 - 2.0 * r0 - 2.0 * r0 * r2 + 2.0 * r1 + 2.0 * r1 * r2 + 2.0 * r2 + 1.0;
  e.n2 = 1.0 - 2.0 * r0 * r0 - 2.0 * r1 * r2;
  e.a11 = -4.0 * r0 * r0 * r1 - 4.0 * r0 * r0 * r2 - 4.0 * r0 * r0 * r1 * r2 - 2.0 * r0 * r0 + 2.0 * r1 -
          4.0 * r1 * r2 * r2 - 4.0 * r1 * r1 * r2 * r2 - 4.0 * r1 * r1 * r2 + 2.0 * r2 + 1.0;
  e.a21 = -2.0 * r0 * r0 * r0 - 2.0 * r0 * r0 * r1 - 2.0 * r0 * r0 * r2 + 2.0 * r0 * r1 * r2 - r0 + r1 -
          2.0 * r1 * r2 * r2 - 2.0 * r1 * r1 + 2.0 * r2 - 2.0 * r1 * r2 + 1.0;
  e.a31 = r0 * (1.0 - 2.0 * r0 - 2.0 * r1 * r2);
  e.a12 = e.a22 = 2.0 * (r1 + r2 + 1.0);
  e.a32 = 1.0 - 2.0 * r0 * r0 - 2.0 * r1 * r2;
  e.a13 = e.a23 = 2.0;
  e.a33 = 2.0 * (r0 - 1.0);
  return e;
}

Eigen::Vector3cd assemble_rhs(const BoundaryRHS& b, double Z) {
  Eigen::Vector3cd v;
  v << b.F2 - b.F1,
       -b.dF1 + b.dF2 + Z * b.F2,
       -b.d2F1 + b.d2F2 + 0.5 * Z * Z * b.F2 + Z * b.dF2;
  return v;
}

BoundarySpectra solve_boundary_data(const std::vector<BoundaryRHS>& rhs, const std::vector<double>& taus, double Z,
                                    double beta) {
  if (rhs.size() != taus.size()) throw std::invalid_argument("solve_boundary_data: size mismatch");
  if (Z == 0.0) throw std::invalid_argument("solve_boundary_data: Z must be nonzero");
  BoundarySpectra out;
  out.h.resize(taus.size());
  out.f.resize(taus.size());
  out.g.resize(taus.size());
  for (size_t i = 0; i < taus.size(); ++i) {
    const RootTriple r = cubic_roots_limit(taus[i], beta);
    const TraceMatrix t = build_M(r, Z);
    if (std::abs(det_cofactor(t.M)) < 1e-12) throw std::runtime_error("solve_boundary_data: near-singular M");
    const Eigen::Vector3cd x = t.M.partialPivLu().solve(assemble_rhs(rhs[i], Z));
    out.h[i] = x[0];
    out.f[i] = x[1];
    out.g[i] = x[2];
  }
  return out;
}

BoundarySpectra solve_boundary_data_closed_form(const std::vector<BoundaryRHS>& rhs, const std::vector<double>& taus,
                                                double beta) {
  if (rhs.size() != taus.size()) throw std::invalid_argument("solve_boundary_data: size mismatch");
  const double Z = 1.0;
  BoundarySpectra out;
  out.h.resize(taus.size());
  out.f.resize(taus.size());
  out.g.resize(taus.size());
  for (size_t i = 0; i < taus.size(); ++i) {
    const InverseEntries e = closed_form_inverse(cubic_roots_limit(taus[i], beta));
    const BoundaryRHS& b = rhs[i];
    // first slot uses F1 - F2 and the third slot repeats d2F1 in the closed expressions;
    // the repeated term is read as d2F2 so that it matches the matrix right-hand side
    const cplx s1 = b.F1 - b.F2;
    const cplx s2 = -b.dF1 + b.dF2;
    const cplx s3 = -b.d2F1 + b.d2F2 + 0.5 * Z * Z * b.F2 + Z * b.dF2;
    out.h[i] = (e.a11 / e.n2 * s1 + e.a12 * s2 + e.a13 * s3) / e.n1;
    out.f[i] = (e.a21 / e.n2 * s1 + e.a22 * s2 + e.a23 * s3) / e.n1;
    out.g[i] = (e.a31 * s1 + e.a32 * s2 + e.a33 * s3) / e.n1;
  }
  return out;
}

Tec3Report probe_tec3_bounds(double beta, const std::vector<double>& taus, double cap) {
  Tec3Report rep;
  rep.cap = cap;
  rep.exponents = {0.0, -1.0 / 3.0, -2.0 / 3.0, -1.0, -1.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0, 0.0, -2.0 / 3.0};
  rep.constants.assign(9, 0.0);
  rep.n1_lower = std::numeric_limits<double>::infinity();
  rep.n2_lower = std::numeric_limits<double>::infinity();
  for (double tau : taus) {
    if (!(std::abs(tau) > 2.0)) throw std::invalid_argument("probe_tec3_bounds: grid must satisfy |tau| > 2");
    const InverseEntries e = closed_form_inverse(cubic_roots_limit(tau, beta));
    const double b = bracket(tau);
    const cplx ratios[9] = {e.a11 / (e.n1 * e.n2), e.a12 / e.n1, e.a13 / e.n1, e.a21 / (e.n1 * e.n2), e.a22 / e.n1,
                            e.a23 / e.n1,          e.a31 / e.n1, e.a32 / e.n1, e.a33 / e.n1};
    bool bad = false;
    for (int i = 0; i < 9; ++i) {
      const double c = std::abs(ratios[i]) * std::pow(b, -rep.exponents[i]);
      if (!std::isfinite(c) || c > cap) bad = true;
      if (std::isfinite(c)) rep.constants[i] = std::max(rep.constants[i], c);
    }
    rep.n1_lower = std::min(rep.n1_lower, std::abs(e.n1) / std::pow(b, 2.0 / 3.0));
    rep.n2_lower = std::min(rep.n2_lower, std::abs(e.n2) / std::pow(b, 2.0 / 3.0));
    if (bad) ++rep.violations;
  }
  return rep;
}

}  // namespace graphkdv
