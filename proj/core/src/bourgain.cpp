#include "graphkdv/bourgain.hpp"

#include "graphkdv/fft.hpp"
#include "graphkdv/halfline_potentials.hpp"
#include "graphkdv/line_ops.hpp"
#include "graphkdv/parallel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace graphkdv {

void BourgainWeights::validate() const {
  if (!(s >= 0.0)) throw std::invalid_argument("bourgain weights: s must be >= 0");
  if (!(b > 0.0 && b < 0.5)) throw std::invalid_argument("bourgain weights: b must lie in (0, 1/2)");
  if (!(sigma > 0.5 && sigma < 2.0 / 3.0)) throw std::invalid_argument("bourgain weights: sigma must lie in (1/2, 2/3)");
}

double weight_nu(double xi, double tau, const BourgainWeights& w) {
  double v = std::pow(1.0 + std::abs(tau - xi * xi * xi + w.beta * xi), w.b);
  if (std::abs(xi) <= 1.0) v += std::pow(1.0 + std::abs(tau), w.sigma);
  return v;
}

double weight_gamma(double xi, double tau, const BourgainWeights& w) {
  double v = std::pow(1.0 + std::abs(tau - xi * xi * xi + w.beta * xi), -w.b);
  if (std::abs(xi) <= 1.0) v += std::pow(1.0 + std::abs(tau), w.sigma - 1.0);
  return v;
}

namespace {

// 2D DFT (space along rows, time along columns)
std::vector<std::vector<cplx>> spacetime_dft(const LineField& f) {
  const int n = f.n();
  const int nt = f.nt();
  std::vector<std::vector<cplx>> cols(nt);
  for (int k = 0; k < nt; ++k) {
    cols[k].resize(n);
    for (int i = 0; i < n; ++i) cols[k][i] = f.values(i, k);
    fft_forward(cols[k]);
  }
  std::vector<std::vector<cplx>> rows(n, std::vector<cplx>(nt));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < nt; ++k) rows[i][k] = cols[k][i];
    fft_forward(rows[i]);
  }
  return rows;
}

template <class Weight>
double weighted_norm(const LineField& f, double s, Weight weight) {
  const int n = f.n();
  const int nt = f.nt();
  if (n < 2 || nt < 2) throw std::invalid_argument("space-time norm needs at least 2 x 2 samples");
  const auto F = spacetime_dft(f);
  const std::vector<double> xi = fft_frequencies(n, f.dy);
  const std::vector<double> tau = fft_frequencies(nt, f.dt);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double js = std::pow(1.0 + xi[i] * xi[i], 0.5 * s);
    for (int k = 0; k < nt; ++k) {
      const double wt = js * weight(xi[i], tau[k]);
      sum += wt * wt * std::norm(F[i][k]);
    }
  }
  return std::sqrt(sum * f.dy * f.dt / (static_cast<double>(n) * nt));
}

}  // namespace

double bourgain_norm(const LineField& f, const BourgainWeights& w) {
  w.validate();
  return weighted_norm(f, w.s, [&](double xi, double tau) { return weight_nu(xi, tau, w); });
}

double dual_norm_Y(const LineField& f, const BourgainWeights& w) {
  w.validate();
  return weighted_norm(f, w.s, [&](double xi, double tau) { return weight_gamma(xi, tau, w); });
}

double spacetime_l2(const LineField& f) { return std::sqrt(f.values.squaredNorm() * f.dy * f.dt); }

namespace {

double sobolev_line(const Eigen::VectorXd& phi, double dy, double s) {
  const LineGrid grid(static_cast<int>(phi.size()), dy);
  const std::vector<cplx> F = grid.forward(phi);
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) sum += std::pow(1.0 + grid.xi()[i] * grid.xi()[i], s) * std::norm(F[i]);
  return std::sqrt(sum * dy / grid.size());
}

Eigen::VectorXd random_profile(const LineGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), centre(-6.0, 6.0), width(0.8, 2.0);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(grid.size());
  for (int bump = 0; bump < 3; ++bump) {
    const double a = amp(rng), c = centre(rng), wd = width(rng);
    for (int i = 0; i < grid.size(); ++i) {
      const double z = (grid.y(i) - c) / wd;
      phi[i] += a * std::exp(-z * z);
    }
  }
  return phi;
}

LineField group_field(const Eigen::VectorXd& phi, const LineGrid& grid, const ProbeOptions& opt, double beta,
                      double T = 1.0) {
  LineField f;
  f.dy = grid.dy();
  f.dt = 2.0 * opt.t_half / opt.nt;
  f.t0 = -opt.t_half;
  f.values.resize(grid.size(), opt.nt);
  const std::vector<cplx> s0 = grid.forward(phi);
  for (int k = 0; k < opt.nt; ++k) {
    const double t = f.t0 + k * f.dt;
    double psi = smooth_cutoff(t / T);
    if (opt.psi_prefactor && T != 1.0) psi /= T;
    if (psi == 0.0) {
      f.values.col(k).setZero();
      continue;
    }
    std::vector<cplx> s(s0);
    grid.propagate(s, t, beta);
    f.values.col(k) = psi * grid.inverse(std::move(s));
  }
  return f;
}

}  // namespace

ProbeReport estimate_probes(const BourgainWeights& w, const ProbeOptions& opt) {
  w.validate();
  if (opt.samples < 1) throw std::invalid_argument("estimate_probes: need at least one sample");
  const LineGrid grid(opt.nx, opt.dy);
  std::mt19937_64 rng(opt.seed);
  std::vector<Eigen::VectorXd> phis;
  for (int i = 0; i < opt.samples; ++i) phis.push_back(random_profile(grid, rng));

  std::vector<double> rg(opt.samples), rd(opt.samples), rb(opt.samples);
  parallel_for(static_cast<size_t>(opt.samples), [&](std::size_t i) {
    const Eigen::VectorXd& phi = phis[i];
    const LineField v = group_field(phi, grid, opt, w.beta);
    const double vx = bourgain_norm(v, w);
    rg[i] = vx / sobolev_line(phi, opt.dy, w.s);

    // psi(t) K(psi w) with w = v, zero before t = 0
    LineField forcing = v;
    const int k0 = static_cast<int>(std::llround(opt.t_half / v.dt));
    LineField fwd;
    fwd.dy = v.dy;
    fwd.dt = v.dt;
    fwd.values = v.values.rightCols(v.nt() - k0);
    const LineField K = duhamel_K(fwd, w.beta);
    LineField kw = v;
    kw.values.setZero();
    for (int k = 0; k < K.nt(); ++k) kw.values.col(k0 + k) = smooth_cutoff(k * v.dt) * K.values.col(k);
    rd[i] = bourgain_norm(kw, w) / dual_norm_Y(forcing, w);

    // psi d_x(v^2) in Y against ||v||_X^2
    LineField bil = v;
    for (int k = 0; k < v.nt(); ++k) {
      const Eigen::VectorXd sq = v.values.col(k).cwiseProduct(v.values.col(k));
      bil.values.col(k) = grid.derivative(sq, 1);
    }
    rb[i] = dual_norm_Y(bil, w) / (vx * vx);
  });

  ProbeReport rep;
  auto stats = [&](const char* name, const std::vector<double>& r) {
    ProbeStats s;
    s.name = name;
    s.samples = static_cast<int>(r.size());
    double sum = 0.0;
    for (double x : r) {
      if (!std::isfinite(x) || x > opt.cap) ++s.violations;
      s.max_ratio = std::max(s.max_ratio, x);
      sum += x;
    }
    s.mean_ratio = sum / r.size();
    return s;
  };
  rep.probes.push_back(stats("group", rg));
  rep.probes.push_back(stats("duhamel", rd));
  rep.probes.push_back(stats("bilinear", rb));

  // psi_T probe on the first sample: least-squares slope of log ||psi_T S phi||_X against log T
  std::vector<double> lx, ly;
  for (double T : opt.psi_T) {
    const LineField f = group_field(phis[0], grid, opt, w.beta, T);
    lx.push_back(std::log(T));
    ly.push_back(std::log(bourgain_norm(f, w)));
  }
  const int n = static_cast<int>(lx.size());
  if (n >= 2) {
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
      mx += lx[i] / n;
      my += ly[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.psiT_slope = sxy / sxx;
  }
  rep.psiT_predicted = 0.5 - w.sigma - w.s / 3.0;
  return rep;
}

}  // namespace graphkdv
