#include "graphkdv/spectral_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace graphkdv {

std::vector<cplx> depressed_cubic_roots(double beta, cplx c) {
  // z = u - beta/(3u), u^3 = -c/2 + sqrt(c^2/4 + beta^3/27)
  const cplx disc = std::sqrt(c * c / 4.0 + beta * beta * beta / 27.0);
  cplx u3 = -c / 2.0 + disc;
  const cplx alt = -c / 2.0 - disc;
  if (std::abs(alt) > std::abs(u3)) u3 = alt;
  std::vector<cplx> z(3, cplx(0.0));
  if (std::abs(u3) != 0.0) {
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
      z[k] = uk - beta / (3.0 * uk);
      uk *= w;
    }
  }
  for (auto& r : z) {
    for (int it = 0; it < 4; ++it) {
      const cplx f = r * r * r + beta * r + c;
      const cplx df = 3.0 * r * r + beta;
      if (std::abs(df) == 0.0) break;
      const cplx step = f / df;
      r -= step;
      if (std::abs(step) <= 1e-17 * (1.0 + std::abs(r))) break;
    }
  }
  return z;
}

double k_beta_inverse(double tau, double beta) {
  if (!(beta < 0.0)) throw std::invalid_argument("k_beta_inverse: beta must be negative");
  if (tau == 0.0) return 0.0;
  const double sgn = tau > 0 ? 1.0 : -1.0;
  const double t = std::abs(tau);
  // phi(xi) = xi^3 - beta xi is odd and increasing; solve on [0, hi].
  double lo = 0.0;
  double hi = std::min(t / -beta, std::cbrt(t));
  if (hi * hi * hi - beta * hi < t) hi = std::max(t / -beta, std::cbrt(t));
  double xi = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = xi * xi * xi - beta * xi - t;
    if (f > 0) hi = xi; else lo = xi;
    const double df = 3.0 * xi * xi - beta;
    double next = xi - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - xi) <= 1e-16 * std::max(1.0, std::abs(xi))) {
      xi = next;
      break;
    }
    xi = next;
  }
  return sgn * xi;
}

namespace {

struct Labelled {
  cplx r0, r1, r2;
};

Labelled classify(const std::vector<cplx>& z, double target_k, double eps, double tau) {
  std::vector<cplx> s = z;
  std::sort(s.begin(), s.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  // at eps > 0 exactly one root lies in the open left half plane
  if (!(s[0].real() < 0.0) || !(s[1].real() > 0.0)) {
    std::ostringstream msg;
    msg << "cubic_roots_limit: ambiguous real-part signs at tau=" << tau << " eps=" << eps;
    throw std::runtime_error(msg.str());
  }
  Labelled l;
  l.r0 = s[0];
  const cplx target(0.0, target_k);
  if (std::abs(s[1] - target) <= std::abs(s[2] - target)) {
    l.r2 = s[1];
    l.r1 = s[2];
  } else {
    l.r2 = s[2];
    l.r1 = s[1];
  }
  return l;
}

}  // namespace

RootTriple cubic_roots_limit(double tau, double beta, double eps) {
  if (!(beta < 0.0)) throw std::invalid_argument("cubic_roots_limit: beta must be negative");
  if (!(eps > 0.0)) throw std::invalid_argument("cubic_roots_limit: eps must be positive");
  const double k = k_beta_inverse(tau, beta);
  const Labelled a = classify(depressed_cubic_roots(beta, cplx(eps, tau)), k, eps, tau);
  const Labelled b = classify(depressed_cubic_roots(beta, cplx(0.5 * eps, tau)), k, 0.5 * eps, tau);
  RootTriple r;
  r.tau = tau;
  r.beta = beta;
  r.eps = eps;
  // roots are analytic in eps; one Richardson step removes the O(eps) term
  r.r0 = 2.0 * b.r0 - a.r0;
  r.r1 = 2.0 * b.r1 - a.r1;
  r.r2 = 2.0 * b.r2 - a.r2;
  r.p = 0.5 * (r.r1.real() - r.r0.real());
  r.q = 0.5 * (r.r0.imag() + r.r1.imag());
  r.k_beta = k;
  return r;
}

RootTriple cubic_roots_damped(double tau, double beta, double sigma) {
  if (!(beta < 0.0)) throw std::invalid_argument("cubic_roots_damped: beta must be negative");
  if (!(sigma > 0.0)) throw std::invalid_argument("cubic_roots_damped: sigma must be positive");
  const double k = k_beta_inverse(tau, beta);
  const Labelled a = classify(depressed_cubic_roots(beta, cplx(sigma, tau)), k, sigma, tau);
  RootTriple r;
  r.tau = tau;
  r.beta = beta;
  r.eps = sigma;
  r.r0 = a.r0;
  r.r1 = a.r1;
  r.r2 = a.r2;
  r.p = 0.5 * (r.r1.real() - r.r0.real());
  r.q = 0.5 * (r.r0.imag() + r.r1.imag());
  r.k_beta = k;
  return r;
}

double vieta_residual(const RootTriple& r) {
  const cplx s1 = r.r0 + r.r1 + r.r2;
  const cplx s2 = r.r0 * r.r1 + r.r0 * r.r2 + r.r1 * r.r2 - r.beta;
  const cplx s3 = r.r0 * r.r1 * r.r2 + cplx(0.0, r.tau);
  const double scale = 1.0 + std::abs(r.tau);
  return std::max({std::abs(s1), std::abs(s2), std::abs(s3)}) / scale;
}

RootBoundsReport probe_root_bounds(double beta, const std::vector<double>& taus, double c_check) {
  if (taus.empty()) throw std::invalid_argument("probe_root_bounds: empty grid");
  RootBoundsReport rep;
  rep.c_check = c_check;
  rep.c_lower_p = std::numeric_limits<double>::infinity();
  rep.q_min = std::numeric_limits<double>::infinity();
  rep.p_min = std::numeric_limits<double>::infinity();
  const double sb = std::sqrt(std::abs(beta));
  for (double tau : taus) {
    if (!std::isfinite(tau)) throw std::invalid_argument("probe_root_bounds: non-finite tau");
    const RootTriple r = cubic_roots_limit(tau, beta);
    const double scale = std::cbrt(std::abs(tau)) + sb;
    const double rmax = std::max({std::abs(r.r0), std::abs(r.r1), std::abs(r.r2)});
    rep.c_upper = std::max(rep.c_upper, rmax / scale);
    if (rmax > c_check * scale) ++rep.violations;
    rep.c_lower_p = std::min(rep.c_lower_p, r.p / scale);
    rep.p_min = std::min(rep.p_min, r.p);
    if (std::abs(r.q) < rep.q_min) {
      rep.q_min = std::abs(r.q);
      rep.q_min_location = tau;
    }
  }
  return rep;
}

}  // namespace graphkdv
