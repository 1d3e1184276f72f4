#include "doctest.h"
#include "oracles.hpp"

#include "graphkdv/trace_system.hpp"

#include <random>

using namespace graphkdv;

namespace {

std::vector<double> symmetric_grid(int n, double tmax) {
  std::vector<double> t;
  for (int i = -n; i <= n; ++i) t.push_back(tmax * i / n);
  return t;
}

}  // namespace

TEST_SUITE("trace_system") {

TEST_CASE("matrix at tau = 0") {
  const TraceMatrix t = build_M(cubic_roots_limit(0.0, -1.0), 1.0);
  Eigen::Matrix3cd ref;
  ref << 1, -1, 0, -1, -1, -1, 1, -0.5, -2;
  CHECK((t.M - ref).norm() < 1e-12);
  CHECK_THROWS(build_M(cubic_roots_limit(0.0, -1.0), 0.0));
}

TEST_CASE("first row never depends on tau") {
  for (double tau : {-30.0, 0.0, 4.0})
    for (double Z : {-1.0, 2.0}) {
      const TraceMatrix t = build_M(cubic_roots_limit(tau, -1.0), Z);
      CHECK(t.M(0, 0) == cplx(1.0));
      CHECK(t.M(0, 1) == cplx(-1.0));
      CHECK(t.M(0, 2) == cplx(0.0));
    }
}

TEST_CASE("cofactor and expanded determinants against LU") {
  for (double Z : {1.0, -1.0, 0.4, 2.5})
    for (double tau : symmetric_grid(200, 1000.0)) {
      const RootTriple r = cubic_roots_limit(tau, -1.0);
      const TraceMatrix t = build_M(r, Z);
      const cplx lu = t.M.determinant();
      CHECK(std::abs(det_cofactor(t.M) - lu) <= 1e-10 * std::abs(lu));
      CHECK(std::abs(det_M_expanded(r, Z) - lu) <= 1e-10 * std::abs(lu));
      // with r0 + r1 + r2 = 0 and r1 r2 = beta + r0^2: det = Z^2/2 - 2 Z r0 + 3 r0^2 + beta
      const cplx simplified = 0.5 * Z * Z - 2.0 * Z * r.r0 + 3.0 * r.r0 * r.r0 - 1.0;
      CHECK(std::abs(simplified - lu) <= 1e-9 * std::abs(lu));
      CHECK(std::abs(lu) > 1e-3);
    }
}

TEST_CASE("closed determinant formula") {
  const RootTriple r0 = cubic_roots_limit(0.0, -1.0);
  CHECK(std::abs(det_M(r0, 1.0) - cplx(3.5, 0.0)) < 1e-12);
  for (double tau : symmetric_grid(100, 500.0)) {
    const RootTriple r = cubic_roots_limit(tau, -1.0);
    const cplx d = det_M(r, 1.3);
    CHECK(d.real() >= 0.5 * 1.3 * 1.3);
    CHECK(d.imag() == r.k_beta);
    if (tau != 0.0) CHECK(d.imag() != 0.0);
  }
}

TEST_CASE("closed inverse data at tau = 0") {
  const InverseEntries e = closed_form_inverse(cubic_roots_limit(0.0, -1.0));
  CHECK(std::abs(e.n2 - cplx(-1.0)) < 1e-12);
  CHECK(std::abs(e.a33 - cplx(-4.0)) < 1e-12);
  CHECK(e.a13 == cplx(2.0));
  CHECK(e.a23 == cplx(2.0));
}

TEST_CASE("boundary data solve") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  const std::vector<double> taus = symmetric_grid(128, 60.0);
  std::vector<BoundaryRHS> rhs(taus.size());
  // Hermitian data: value at -tau is the conjugate of the value at tau
  const int mid = 128;
  for (int i = 0; i <= mid; ++i) {
    BoundaryRHS b;
    for (cplx* c : {&b.F1, &b.dF1, &b.d2F1, &b.F2, &b.dF2, &b.d2F2}) *c = cplx(N(rng), i == 0 ? 0.0 : N(rng));
    rhs[mid + i] = b;
    BoundaryRHS c = b;
    for (cplx* z : {&c.F1, &c.dF1, &c.d2F1, &c.F2, &c.dF2, &c.d2F2}) *z = std::conj(*z);
    rhs[mid - i] = c;
  }
  for (double Z : {1.0, -0.7}) {
    const BoundarySpectra s = solve_boundary_data(rhs, taus, Z, -1.0);
    for (size_t i = 0; i < taus.size(); ++i) {
      const TraceMatrix t = build_M(cubic_roots_limit(taus[i], -1.0), Z);
      const Eigen::Vector3cd x(s.h[i], s.f[i], s.g[i]);
      const Eigen::Vector3cd b = assemble_rhs(rhs[i], Z);
      CHECK((t.M * x - b).norm() <= 1e-12 * (1.0 + b.norm()) * (1.0 + t.M.norm()));
      CHECK(std::abs((s.h[i] - s.f[i]) - (rhs[i].F2 - rhs[i].F1)) < 1e-12 * (1.0 + x.norm()));
      const size_t j = taus.size() - 1 - i;
      CHECK(std::abs(s.h[j] - std::conj(s.h[i])) < 1e-10 * (1.0 + std::abs(s.h[i])));
      CHECK(std::abs(s.g[j] - std::conj(s.g[i])) < 1e-10 * (1.0 + std::abs(s.g[i])));
    }
  }
  const std::vector<BoundaryRHS> zero(taus.size());
  const BoundarySpectra z = solve_boundary_data(zero, taus, 1.0, -1.0);
  for (size_t i = 0; i < taus.size(); ++i) CHECK(std::abs(z.h[i]) + std::abs(z.f[i]) + std::abs(z.g[i]) == 0.0);
  CHECK_THROWS(solve_boundary_data(zero, {0.0}, 1.0, -1.0));
}

TEST_CASE("high-frequency bounds of the closed inverse") {
  std::vector<double> taus;
  for (int i = 0; i <= 300; ++i) {
    const double t = std::pow(10.0, std::log10(2.0) + 1e-9 + (4.0 - std::log10(2.0)) * i / 300.0);
    taus.push_back(t);
    taus.push_back(-t);
  }
  const Tec3Report rep = probe_tec3_bounds(-1.0, taus);
  CHECK(rep.violations == 0);
  CHECK(rep.n1_lower > 0.0);
  CHECK(rep.constants.size() == 9);
  for (double c : rep.constants) CHECK(std::isfinite(c));
  CHECK_THROWS(probe_tec3_bounds(-1.0, {1.0}));
}

}
