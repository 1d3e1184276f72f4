#include "graphkdv/halfline_potentials.hpp"

#include "graphkdv/fft.hpp"
#include "graphkdv/line_ops.hpp"
#include "graphkdv/parallel.hpp"
#include "graphkdv/stencils.hpp"

#include <cmath>
#include <stdexcept>

namespace graphkdv {

void TimeSeries::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time series: dt must be positive");
  if (values.size() < 16) throw std::invalid_argument("time series: need at least 16 samples");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("time series: non-finite sample");
}

FrequencyGrid::FrequencyGrid(int n, double dt, double beta, double damping)
    : dt_(dt), beta_(beta), damping_(damping) {
  if (n < 2) throw std::invalid_argument("frequency grid: need n >= 2");
  if (damping < 0.0) throw std::invalid_argument("frequency grid: damping must be >= 0");
  taus_ = fft_frequencies(n, dt);
  roots_.resize(taus_.size());
  parallel_for(taus_.size(), [&](std::size_t k) {
    roots_[k] = damping > 0.0 ? cubic_roots_damped(taus_[k], beta, damping) : cubic_roots_limit(taus_[k], beta);
  });
}

namespace {

cplx ipow(cplx r, int d) {
  cplx v = 1.0;
  for (int j = 0; j < d; ++j) v *= r;
  return v;
}

// g(r) = r^d e^{r x} and its r-derivative
cplx g_of(cplx r, double x, int d) { return ipow(r, d) * std::exp(r * x); }
cplx dg_of(cplx r, double x, int d) {
  const cplx e = std::exp(r * x);
  return (d > 0 ? static_cast<double>(d) * ipow(r, d - 1) : cplx(0.0)) * e + x * ipow(r, d) * e;
}

}  // namespace

cplx FrequencyGrid::multiplier(PotentialKind kind, int k, double x, int d) const {
  const RootTriple& r = roots_[k];
  switch (kind) {
    case PotentialKind::R:
      if (x < 0.0) throw std::invalid_argument("potential R needs x >= 0");
      return g_of(r.r0, x, d);
    case PotentialKind::L1:
    case PotentialKind::L2: {
      if (x > 0.0) throw std::invalid_argument("potentials L1, L2 need x <= 0");
      const cplx diff = r.r1 - r.r2;
      if (std::abs(diff) < 1e-8) {
        const cplx mid = 0.5 * (r.r1 + r.r2);
        if (kind == PotentialKind::L2) return dg_of(mid, x, d);
        return g_of(mid, x, d) - mid * dg_of(mid, x, d);
      }
      if (kind == PotentialKind::L2) return (g_of(r.r1, x, d) - g_of(r.r2, x, d)) / diff;
      return (r.r1 * g_of(r.r2, x, d) - r.r2 * g_of(r.r1, x, d)) / diff;
    }
  }
  return 0.0;
}

cplx FrequencyGrid::trace_multiplier(PotentialKind kind, int k, int d) const {
  const RootTriple& r = roots_[k];
  if (d < 0 || d > 2) throw std::invalid_argument("trace order must be 0, 1 or 2");
  switch (kind) {
    case PotentialKind::R: return ipow(r.r0, d);
    case PotentialKind::L1: return d == 0 ? cplx(1.0) : d == 1 ? cplx(0.0) : -r.r1 * r.r2;
    case PotentialKind::L2: return d == 0 ? cplx(0.0) : d == 1 ? cplx(1.0) : r.r1 + r.r2;
  }
  return 0.0;
}

std::vector<cplx> spectrum(const std::vector<double>& signal) {
  std::vector<cplx> s(signal.begin(), signal.end());
  fft_forward(s);
  return s;
}

std::vector<double> real_signal(std::vector<cplx> spec) {
  fft_inverse(spec);
  std::vector<double> out(spec.size());
  for (size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
  return out;
}

SpaceTimeField potential_field(PotentialKind kind, const TimeSeries& input, const std::vector<double>& xs,
                               double beta, int d) {
  input.validate();
  const int n = input.size();
  const FrequencyGrid fg(n, input.dt, beta);
  const std::vector<cplx> spec = spectrum(input.values);
  SpaceTimeField out;
  out.x = xs;
  out.t0 = input.t0;
  out.dt = input.dt;
  out.values.resize(static_cast<Eigen::Index>(xs.size()), n);
  parallel_for(xs.size(), [&](std::size_t i) {
    std::vector<cplx> s(spec);
    for (int k = 0; k < n; ++k) s[k] *= fg.multiplier(kind, k, xs[i], d);
    const std::vector<double> v = real_signal(std::move(s));
    for (int k = 0; k < n; ++k) out.values(static_cast<Eigen::Index>(i), k) = v[k];
  });
  return out;
}

namespace {

TimeSeries row_series(const SpaceTimeField& f, const TimeSeries& like) {
  TimeSeries t;
  t.t0 = like.t0;
  t.dt = like.dt;
  t.values.resize(f.nt());
  for (int k = 0; k < f.nt(); ++k) t.values[k] = f.values(0, k);
  return t;
}

}  // namespace

TimeSeries potential_R(const TimeSeries& h, double x, double beta) {
  return row_series(potential_field(PotentialKind::R, h, {x}, beta), h);
}
TimeSeries potential_L1(const TimeSeries& f, double x, double beta) {
  return row_series(potential_field(PotentialKind::L1, f, {x}, beta), f);
}
TimeSeries potential_L2(const TimeSeries& g, double x, double beta) {
  return row_series(potential_field(PotentialKind::L2, g, {x}, beta), g);
}

TimeSeries potential_traces(PotentialKind kind, const TimeSeries& input, double beta, int d) {
  input.validate();
  const int n = input.size();
  const FrequencyGrid fg(n, input.dt, beta);
  std::vector<cplx> s = spectrum(input.values);
  for (int k = 0; k < n; ++k) s[k] *= fg.trace_multiplier(kind, k, d);
  TimeSeries out = input;
  out.values = real_signal(std::move(s));
  return out;
}

SigmaExtension reflection_coefficients(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < 0) throw std::invalid_argument("reflection_coefficients: no nodes");
  Eigen::MatrixXd A(n + 1, n + 1);
  for (int d = 0; d <= n; ++d)
    for (int k = 0; k <= n; ++k) A(d, k) = std::pow(-nodes[k], d);
  SigmaExtension s;
  s.n = n;
  s.nodes = nodes;
  const Eigen::VectorXd c = A.fullPivLu().solve(Eigen::VectorXd::Ones(n + 1));
  s.c.assign(c.data(), c.data() + c.size());
  return s;
}

SigmaExtension sigma_coefficients(int n) {
  if (n < 0) throw std::invalid_argument("sigma_coefficients: n must be >= 0");
  if (n > 12) throw std::invalid_argument("sigma_coefficients: n > 12 is too ill-conditioned");
  std::vector<double> nodes(n + 1);
  for (int k = 0; k <= n; ++k) nodes[k] = std::ldexp(1.0, -k);
  return reflection_coefficients(nodes);
}

double sigma_eval(const SigmaExtension& s, double p, double x, int d) {
  if (x >= 0.0) return std::pow(p, d) * std::exp(p * x);
  double v = 0.0;
  for (int k = 0; k <= s.n; ++k) {
    const double rate = -p * s.nodes[k];
    v += s.c[k] * std::pow(rate, d) * std::exp(rate * x);
  }
  return v;
}

std::vector<double> jet_extension(const Eigen::Ref<const Eigen::VectorXd>& half, double h, int count, int n,
                                  double width) {
  if (n < 0 || n > 8) throw std::invalid_argument("jet_extension: order must be in [0, 8]");
  const int m = static_cast<int>(half.size());
  std::vector<double> jet(n + 1);
  for (int d = 0; d <= n; ++d) {
    const std::vector<double> wts = one_sided_weights(d, 6);
    if (static_cast<int>(wts.size()) > m) throw std::invalid_argument("jet_extension: too few samples");
    double v = 0.0;
    for (size_t i = 0; i < wts.size(); ++i) v += wts[i] * half[static_cast<Eigen::Index>(i)];
    jet[d] = v / std::pow(h, d);
  }
  // Q = jet * exp(x^2/w^2) truncated at degree n, so that Q exp(-x^2/w^2) has the same n-jet;
  // the Gaussian weight keeps the extension free of high wavenumbers
  std::vector<double> p(n + 1), q(n + 1, 0.0);
  double fact = 1.0;
  for (int d = 0; d <= n; ++d) {
    if (d > 0) fact *= d;
    p[d] = jet[d] / fact;
  }
  std::vector<double> g(n + 1, 0.0);
  double kf = 1.0;
  for (int k = 0; 2 * k <= n; ++k) {
    if (k > 0) kf *= k;
    g[2 * k] = 1.0 / (kf * std::pow(width, 2 * k));
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) q[i + j] += p[i] * g[j];
  std::vector<double> out(static_cast<size_t>(count), 0.0);
  for (int j = 0; j < count; ++j) {
    const double x = -j * h;
    const double weight = std::exp(-(x / width) * (x / width));
    if (weight < 1e-300) break;
    double v = 0.0;
    for (int d = n; d >= 0; --d) v = v * x + q[d];
    out[j] = v * weight;
  }
  return out;
}

double smooth_cutoff(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double u = 2.0 - a;  // in (0,1)
  const double f1 = std::exp(-1.0 / u);
  const double f0 = std::exp(-1.0 / (1.0 - u));
  return f1 / (f1 + f0);
}

CausalWindow CausalWindow::make(int nt, double dt, const IbvpOptions& opt) {
  if (nt < 2) throw std::invalid_argument("causal window: need at least two samples");
  CausalWindow w;
  w.nt = nt;
  w.dt = dt;
  w.taper = std::max(4, static_cast<int>(std::lround(opt.taper_fraction * (nt - 1))));
  w.n_fft = std::max(16, next_power_of_two(static_cast<long>(opt.pad_factor) * (nt + w.taper)));
  w.damping = opt.damping_factor / (w.n_fft * dt);
  return w;
}

std::vector<double> CausalWindow::embed(const std::vector<double>& samples) const {
  if (static_cast<int>(samples.size()) != nt) throw std::invalid_argument("causal window: sample count mismatch");
  std::vector<double> out(static_cast<size_t>(n_fft), 0.0);
  for (int k = 0; k < nt; ++k) out[k] = samples[k];
  // smooth continuation past T: Taylor jet at the last sample, rolled off over the taper
  Eigen::VectorXd back(nt);
  for (int k = 0; k < nt; ++k) back[k] = samples[nt - 1 - k];
  const int order = std::min(5, nt - 7);
  const std::vector<double> ext = jet_extension(back, dt, taper + 1, std::max(0, order), taper * dt / 6.0);
  for (int j = 1; j <= taper; ++j) out[nt - 1 + j] = ext[j];
  if (damping > 0.0)
    for (int k = 0; k < nt + taper; ++k) out[k] *= std::exp(-damping * k * dt);
  return out;
}

namespace {

void check_series(const TimeSeries& s) {
  if (!(s.dt > 0.0)) throw std::invalid_argument("boundary data: dt must be positive");
  if (s.t0 != 0.0) throw std::invalid_argument("boundary data must start at t = 0");
  if (s.values.size() < 2) throw std::invalid_argument("boundary data: too few samples");
}

SpaceTimeField make_field(int m, double h, int direction, int nt, double dt) {
  SpaceTimeField f;
  f.x.resize(m);
  for (int j = 0; j < m; ++j) f.x[j] = direction * j * h;
  f.t0 = 0.0;
  f.dt = dt;
  f.values = Eigen::MatrixXd::Zero(m, nt);
  return f;
}

}  // namespace

LineGrid half_line_grid(int m, double h) { return LineGrid::covering(3.0 * (m - 1) * h, h); }

HalfLineEvolution evolve_half_line(const Eigen::VectorXd& data, double h, int direction, int nt, double dt,
                                   double beta, const IbvpOptions& opt, const LineForcing& forcing) {
  const int m = static_cast<int>(data.size());
  if (nt < 1) throw std::invalid_argument("evolve_half_line: need at least one time sample");
  const LineGrid grid = half_line_grid(m, h);
  const int n = grid.size();
  HalfLineEvolution ev;
  ev.field.resize(m, nt);
  for (auto& t : ev.traces) t.resize(nt);
  auto record = [&](int k, std::vector<cplx> s) {
    for (int d = 0; d < 3; ++d) ev.traces[d][k] = grid.trace(s, d);
    ev.field.col(k) = restrict_half_line(grid, grid.inverse(std::move(s)), direction, m);
  };
  const std::vector<cplx> spec0 = grid.forward(embed_half_line(grid, data, direction, opt.extension_order,
                                                               opt.extension_width));
  if (!forcing) {
    parallel_for(static_cast<size_t>(nt), [&](std::size_t k) {
      std::vector<cplx> s(spec0);
      grid.propagate(s, static_cast<double>(k) * dt, beta);
      record(static_cast<int>(k), std::move(s));
    });
    return ev;
  }
  std::vector<FilonWeights> fw(n);
  for (int k = 0; k < n; ++k) fw[k] = filon_weights(grid.phase(k, beta) * dt);
  std::vector<cplx> s(spec0);
  std::vector<cplx> f0 = grid.forward(forcing(0, grid));
  record(0, s);
  for (int k = 1; k < nt; ++k) {
    std::vector<cplx> f1 = grid.forward(forcing(k, grid));
    for (int i = 0; i < n; ++i) s[i] = fw[i].e * s[i] + dt * (fw[i].a * f0[i] + fw[i].b * f1[i]);
    record(k, s);
    f0.swap(f1);
  }
  return ev;
}

void add_potential(Eigen::MatrixXd& field, PotentialKind kind, const std::vector<cplx>& window_spectrum,
                   const FrequencyGrid& fg, double h, int direction) {
  const int n = static_cast<int>(window_spectrum.size());
  if (n != fg.size()) throw std::invalid_argument("add_potential: spectrum and frequency grid differ");
  const int nt = static_cast<int>(field.cols());
  parallel_for(static_cast<size_t>(field.rows()), [&](std::size_t j) {
    std::vector<cplx> s(window_spectrum);
    const double x = direction * static_cast<double>(j) * h;
    for (int k = 0; k < n; ++k) s[k] *= fg.multiplier(kind, k, x, 0);
    const std::vector<double> v = real_signal(std::move(s));
    for (int k = 0; k < nt; ++k) field(static_cast<Eigen::Index>(j), k) += v[k] * std::exp(fg.damping() * k * fg.dt());
  });
}

std::vector<double> potential_boundary_trace(PotentialKind kind, const std::vector<cplx>& window_spectrum,
                                             const FrequencyGrid& fg, int nt, int d) {
  const int n = static_cast<int>(window_spectrum.size());
  if (n != fg.size()) throw std::invalid_argument("potential_boundary_trace: spectrum and frequency grid differ");
  std::vector<cplx> s(window_spectrum);
  for (int k = 0; k < n; ++k) s[k] *= fg.multiplier(kind, k, 0.0, d);
  const std::vector<double> v = real_signal(std::move(s));
  std::vector<double> out(nt);
  for (int k = 0; k < nt; ++k) out[k] = v[k] * std::exp(fg.damping() * k * fg.dt());
  return out;
}

IbvpResult linear_ibvp_right(const Eigen::VectorXd& v0, double h, const TimeSeries& f, double beta,
                             const IbvpOptions& opt) {
  check_series(f);
  const int nt = f.size();
  const int m = static_cast<int>(v0.size());
  const HalfLineEvolution fe = evolve_half_line(v0, h, +1, nt, f.dt, beta, opt);
  IbvpResult res;
  res.corner_mismatch = std::abs(f.values[0] - v0[0]);
  res.corner_warning = res.corner_mismatch > opt.corner_tol;
  std::vector<double> hstar(nt);
  for (int k = 0; k < nt; ++k) hstar[k] = f.values[k] - fe.traces[0][k];
  const CausalWindow win = CausalWindow::make(nt, f.dt, opt);
  const FrequencyGrid fg(win.n_fft, f.dt, beta, win.damping);
  res.field = make_field(m, h, +1, nt, f.dt);
  res.field.values = fe.field;
  add_potential(res.field.values, PotentialKind::R, spectrum(win.embed(hstar)), fg, h, +1);
  return res;
}

IbvpResult linear_ibvp_left(const Eigen::VectorXd& w0, double h, const TimeSeries& g, const TimeSeries& hb,
                            double beta, const IbvpOptions& opt) {
  check_series(g);
  check_series(hb);
  if (g.size() != hb.size() || g.dt != hb.dt) throw std::invalid_argument("linear_ibvp_left: data grids differ");
  const int nt = g.size();
  const int m = static_cast<int>(w0.size());
  const HalfLineEvolution fe = evolve_half_line(w0, h, -1, nt, g.dt, beta, opt);
  IbvpResult res;
  res.corner_mismatch = std::abs(g.values[0] - w0[0]);
  res.corner_warning = res.corner_mismatch > opt.corner_tol;
  // L1 carries the value, L2 the slope; their trace matrix at the boundary is the identity
  std::vector<double> gstar(nt), hstar(nt);
  for (int k = 0; k < nt; ++k) {
    gstar[k] = g.values[k] - fe.traces[0][k];
    hstar[k] = hb.values[k] - fe.traces[1][k];
  }
  const CausalWindow win = CausalWindow::make(nt, g.dt, opt);
  const FrequencyGrid fg(win.n_fft, g.dt, beta, win.damping);
  res.field = make_field(m, h, -1, nt, g.dt);
  res.field.values = fe.field;
  add_potential(res.field.values, PotentialKind::L1, spectrum(win.embed(gstar)), fg, h, -1);
  add_potential(res.field.values, PotentialKind::L2, spectrum(win.embed(hstar)), fg, h, -1);
  return res;
}

}  // namespace graphkdv
