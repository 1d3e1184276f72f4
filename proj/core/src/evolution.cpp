#include "graphkdv/evolution.hpp"

#include "graph_spectral.hpp"
#include "graphkdv/line_ops.hpp"
#include "graphkdv/parallel.hpp"
#include "graphkdv/stencils.hpp"
#include "graphkdv/trace_system.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace graphkdv {

Eigen::VectorXd airy_group(const Eigen::VectorXd& phi, double dy, double t, double beta) {
  const LineGrid grid(static_cast<int>(phi.size()), dy);
  std::vector<cplx> s = grid.forward(phi);
  grid.propagate(s, t, beta);
  return grid.inverse(std::move(s));
}

double boundary_mass(const Eigen::VectorXd& phi, double fraction) {
  const int n = static_cast<int>(phi.size());
  const int k = std::max(1, static_cast<int>(fraction * n));
  return std::max(phi.head(k).cwiseAbs().maxCoeff(), phi.tail(k).cwiseAbs().maxCoeff());
}

LineField duhamel_K(const LineField& w, double beta) {
  const int n = w.n();
  const int nt = w.nt();
  const LineGrid grid(n, w.dy);
  LineField out = w;
  out.values.setZero();
  if (nt == 0) return out;
  std::vector<FilonWeights> fw(n);
  for (int k = 0; k < n; ++k) fw[k] = filon_weights(grid.phase(k, beta) * w.dt);
  std::vector<cplx> acc(n, cplx(0.0));
  std::vector<cplx> f0 = grid.forward(w.values.col(0));
  for (int j = 1; j < nt; ++j) {
    std::vector<cplx> f1 = grid.forward(w.values.col(j));
    for (int k = 0; k < n; ++k) acc[k] = fw[k].e * acc[k] + w.dt * (fw[k].a * f0[k] + fw[k].b * f1[k]);
    out.values.col(j) = grid.inverse(acc);
    f0.swap(f1);
  }
  return out;
}

namespace detail {

void check_uniform_times(const std::vector<double>& times) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  if (times[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("time grid must be increasing");
  for (size_t k = 1; k < times.size(); ++k)
    if (std::abs(times[k] - k * dt) > 1e-9 * (1.0 + k * dt)) throw std::invalid_argument("time grid must be uniform");
}

void check_symmetric(const GraphFunction& u0, double tol) {
  for (int k = 1; k < u0.graph.n_minus; ++k)
    if ((u0.minus[k] - u0.minus[0]).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("the spectral solvers need identical data on edges of the same side");
  for (int k = 1; k < u0.graph.n_plus; ++k)
    if ((u0.plus[k] - u0.plus[0]).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("the spectral solvers need identical data on edges of the same side");
}

CoupledHalfLines couple_vertex(const HalfLineEvolution& right, const HalfLineEvolution& left, double h, double ds,
                               double beta_t, double Z, const IbvpOptions& opt) {
  const int nt = static_cast<int>(right.field.cols());
  const CausalWindow win = CausalWindow::make(nt, ds, opt);
  const FrequencyGrid fg(win.n_fft, ds, beta_t, win.damping);
  std::array<std::vector<cplx>, 3> sr, sl;
  for (int d = 0; d < 3; ++d) {
    sr[d] = spectrum(win.embed(right.traces[d]));
    sl[d] = spectrum(win.embed(left.traces[d]));
  }
  const int n = win.n_fft;
  std::vector<cplx> H(n), F(n), G(n);
  parallel_for(static_cast<size_t>(n), [&](std::size_t k) {
    const TraceMatrix tm = build_M(fg.roots(static_cast<int>(k)), Z);
    const BoundaryRHS b{sr[0][k], sr[1][k], sr[2][k], sl[0][k], sl[1][k], sl[2][k]};
    const Eigen::Vector3cd x = tm.M.partialPivLu().solve(assemble_rhs(b, Z));
    H[k] = x[0];
    F[k] = x[1];
    G[k] = x[2];
  });
  CoupledHalfLines out;
  out.right = right.field;
  out.left = left.field;
  add_potential(out.right, PotentialKind::R, H, fg, h, +1);
  add_potential(out.left, PotentialKind::L1, F, fg, h, -1);
  add_potential(out.left, PotentialKind::L2, G, fg, h, -1);

  // traces through the kernel multipliers, independent of the closed-form trace matrix
  std::array<std::vector<double>, 3> tr, tl;
  for (int d = 0; d < 3; ++d) {
    const std::vector<double> ph = potential_boundary_trace(PotentialKind::R, H, fg, nt, d);
    const std::vector<double> pf = potential_boundary_trace(PotentialKind::L1, F, fg, nt, d);
    const std::vector<double> pg = potential_boundary_trace(PotentialKind::L2, G, fg, nt, d);
    tr[d].resize(nt);
    tl[d].resize(nt);
    for (int k = 0; k < nt; ++k) {
      tr[d][k] = right.traces[d][k] + ph[k];
      tl[d][k] = left.traces[d][k] + pf[k] + pg[k];
    }
  }
  out.residual.resize(nt);
  for (int k = 0; k < nt; ++k) {
    const double c0 = std::abs(tr[0][k] - tl[0][k]);
    const double c1 = std::abs(tr[1][k] - tl[1][k] - Z * tl[0][k]);
    const double c2 = std::abs(tr[2][k] - tl[2][k] - 0.5 * Z * Z * tl[0][k] - Z * tl[1][k]);
    out.residual[k] = std::max({c0, c1, c2});
  }
  return out;
}

GraphField to_graph_field(const GraphFunction& like, const Eigen::MatrixXd& right, const Eigen::MatrixXd& left,
                          const std::vector<double>& times, double Z, double alpha, double beta) {
  GraphField gf;
  gf.Z = Z;
  gf.alpha = alpha;
  gf.beta = beta;
  gf.times = times;
  const int nt = static_cast<int>(times.size());
  for (int k = 0; k < nt; ++k) {
    GraphFunction u(like.graph, like.grid);
    for (auto& e : u.minus) e = alpha * right.col(k);
    for (auto& e : u.plus) e = alpha * left.col(k);
    gf.l2_norms.push_back(std::sqrt(inner_product(u, u)));
    gf.states.push_back(std::move(u));
  }
  gf.stop_time = times.back();
  return gf;
}

}  // namespace detail

GraphField graph_group(const GraphFunction& u0, const std::vector<double>& times, double Z, double beta, double alpha,
                       const GroupOptions& opt) {
  if (!(alpha > 0.0)) throw std::invalid_argument("graph_group: alpha must be positive");
  if (!(beta < 0.0)) throw std::invalid_argument("graph_group: beta must be negative");
  if (Z == 0.0) throw std::invalid_argument("graph_group: Z must be nonzero");
  detail::check_uniform_times(times);
  u0.validate();
  detail::check_symmetric(u0, 1e-12);
  const DomainCheck dc = vertex_condition_residuals(u0, Z);
  if (dc.continuity > opt.compat_tol || dc.first_jump > opt.compat_tol) {
    std::ostringstream msg;
    msg << "graph_group: initial data violates the vertex conditions (continuity " << dc.continuity << ", flux "
        << dc.first_jump << ")";
    throw std::invalid_argument(msg.str());
  }
  const int nt = static_cast<int>(times.size());
  const double ds = alpha * (times[1] - times[0]);
  const double bt = beta / alpha;
  const double h = u0.grid.h;
  const HalfLineEvolution er = evolve_half_line(u0.minus[0] / alpha, h, +1, nt, ds, bt, opt.ibvp);
  const HalfLineEvolution el = evolve_half_line(u0.plus[0] / alpha, h, -1, nt, ds, bt, opt.ibvp);
  const detail::CoupledHalfLines c = detail::couple_vertex(er, el, h, ds, bt, Z, opt.ibvp);
  GraphField gf = detail::to_graph_field(u0, c.right, c.left, times, Z, alpha, beta);
  for (double r : c.residual) gf.vertex_residuals.push_back(alpha * r);
  return gf;
}

FdResult fd_solve(const GraphFunction& u0, double Z, double alpha, double beta, const FdOptions& opt) {
  if (!(alpha > 0.0)) throw std::invalid_argument("fd_solve: alpha must be positive");
  if (!(opt.dt > 0.0) || !(opt.T >= 0.0)) throw std::invalid_argument("fd_solve: need dt > 0 and T >= 0");
  if (opt.store_every < 1) throw std::invalid_argument("fd_solve: store_every must be >= 1");
  u0.validate();
  const GraphDiscretization disc(u0.graph, u0.grid, Z, opt.disc);
  const int n = disc.size();
  const SpMat A = disc.linear_operator(alpha, beta, opt.sponge);
  SpMat I(n, n);
  I.setIdentity();
  const SpMat lhs = I - 0.5 * opt.dt * A;
  const SpMat rhs_op = I + 0.5 * opt.dt * A;
  Eigen::SparseLU<SpMat> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("fd_solve: factorization failed");

  FdResult res;
  const Eigen::VectorXd raw = disc.pack(u0);
  Eigen::VectorXd u = disc.project(raw);
  res.initial_projection = disc.l2_norm(u - raw);
  GraphField& gf = res.field;
  gf.Z = Z;
  gf.alpha = alpha;
  gf.beta = beta;
  auto store = [&](double t) {
    gf.times.push_back(t);
    gf.states.push_back(disc.unpack(u));
    gf.l2_norms.push_back(disc.l2_norm(u));
    gf.vertex_residuals.push_back(disc.constraint_residual(u));
  };
  store(0.0);
  const double norm0 = disc.l2_norm(u);
  const int steps = static_cast<int>(std::llround(opt.T / opt.dt));
  for (int s = 1; s <= steps; ++s) {
    Eigen::VectorXd rhs = rhs_op * u;
    Eigen::VectorXd v;
    if (opt.nonlinear) {
      rhs += 0.5 * opt.dt * disc.nonlinear_term(u);
      v = u;
      int it = 0;
      for (;; ++it) {
        if (it >= opt.max_inner) {
          std::ostringstream msg;
          msg << "fd_solve: inner iteration did not converge at t=" << s * opt.dt;
          throw std::runtime_error(msg.str());
        }
        Eigen::VectorXd next = lu.solve(rhs + 0.5 * opt.dt * disc.nonlinear_term(v));
        const double change = (next - v).cwiseAbs().maxCoeff();
        v.swap(next);
        if (change <= opt.inner_tol * (1.0 + v.cwiseAbs().maxCoeff())) break;
      }
      res.max_inner_iterations = std::max(res.max_inner_iterations, it + 1);
    } else {
      v = lu.solve(rhs);
    }
    u = disc.project(v);
    res.steps = s;
    const double nrm = disc.l2_norm(u);
    if (!std::isfinite(nrm) || (norm0 > 0.0 && nrm > opt.blowup_factor * norm0)) {
      gf.blew_up = true;
      gf.stop_time = s * opt.dt;
      store(s * opt.dt);
      return res;
    }
    if (s % opt.store_every == 0 || s == steps) store(s * opt.dt);
  }
  gf.stop_time = steps * opt.dt;
  return res;
}

namespace {

// CN for du/dt = A u + b_0 c0(t) + b_1 c1(t) on the interior nodes.
SpaceTimeField halfline_fd(const Eigen::VectorXd& data, double h, const std::vector<const TimeSeries*>& bc,
                           double beta, int direction) {
  const int m = static_cast<int>(data.size());
  if (m < 8) throw std::invalid_argument("halfline_fd: need at least 8 nodes");
  const TimeSeries& ref = *bc[0];
  const int nt = ref.size();
  const double dt = ref.dt;
  const int M = m - 1;  // node M is the far end, u = 0
  const int nu = M - 1;  // unknowns at distances 1..M-1
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<Eigen::VectorXd> bvec(bc.size(), Eigen::VectorXd::Zero(nu));
  const double h3 = h * h * h;
  // y-offsets of the five-point stencils, coefficients for d3 and d1
  const double c3[5] = {-1.0 / (2 * h3), 2.0 / (2 * h3), 0.0, -2.0 / (2 * h3), 1.0 / (2 * h3)};
  const double c1[5] = {0.0, -1.0 / (2 * h), 0.0, 1.0 / (2 * h), 0.0};
  // distance index of the node at y-offset o (in steps) from the node at distance j
  auto add = [&](int row, int dist, double val) {
    // dist measured from the boundary along the half-line; may be -1 (ghost across the boundary)
    if (dist == 0) {
      bvec[0][row] += val;
    } else if (dist >= 1 && dist <= M - 1) {
      trips.emplace_back(row, dist - 1, val);
    } else if (dist == M) {
      // far end, u = 0
    } else if (dist == M + 1) {
      if (direction > 0) {
        trips.emplace_back(row, M - 2, val);  // ghost u_{M+1} = u_{M-1}
      } else {
        // inflow end takes a single condition: quadratic extrapolation through u_M = 0
        trips.emplace_back(row, M - 2, -3.0 * val);
        trips.emplace_back(row, M - 3, val);
      }
    } else if (dist == -1) {
      // left only: w(h) = w(-h) + 2 h hb, i.e. ghost across y = 0 from the slope condition
      trips.emplace_back(row, 0, val);
      bvec[1][row] += val * 2.0 * h;
    } else {
      throw std::logic_error("halfline_fd: stencil out of range");
    }
  };
  for (int j = 1; j <= M - 1; ++j) {
    const int row = j - 1;
    if (direction > 0 && j == 1) {
      const std::vector<double> w3 = fd_weights(1.0, {0.0, 1.0, 2.0, 3.0, 4.0}, 3);
      for (int k = 0; k < 5; ++k) add(row, k, -w3[k] / h3);
      add(row, 0, beta / (2 * h));
      add(row, 2, -beta / (2 * h));
      continue;
    }
    for (int o = -2; o <= 2; ++o) {
      const double c = -(c3[o + 2] + beta * c1[o + 2]);
      if (c == 0.0) continue;
      // y offset o: along the half-line the distance changes by direction * o
      add(row, j + direction * o, c);
    }
  }
  SpMat A(nu, nu);
  A.setFromTriplets(trips.begin(), trips.end());
  SpMat I(nu, nu);
  I.setIdentity();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(SpMat(I - 0.5 * dt * A));
  if (lu.info() != Eigen::Success) throw std::runtime_error("halfline_fd: factorization failed");
  const SpMat B = I + 0.5 * dt * A;

  SpaceTimeField out;
  out.x.resize(m);
  for (int j = 0; j < m; ++j) out.x[j] = direction * j * h;
  out.t0 = 0.0;
  out.dt = dt;
  out.values = Eigen::MatrixXd::Zero(m, nt);
  Eigen::VectorXd u = data.segment(1, nu);
  auto put = [&](int k) {
    out.values(0, k) = bc[0]->values[k];
    out.values.col(k).segment(1, nu) = u;
  };
  put(0);
  for (int k = 1; k < nt; ++k) {
    Eigen::VectorXd rhs = B * u;
    for (size_t c = 0; c < bc.size(); ++c) rhs += 0.5 * dt * (bc[c]->values[k - 1] + bc[c]->values[k]) * bvec[c];
    u = lu.solve(rhs);
    put(k);
  }
  return out;
}

}  // namespace

SpaceTimeField halfline_fd_right(const Eigen::VectorXd& v0, double h, const TimeSeries& f, double beta) {
  return halfline_fd(v0, h, {&f}, beta, +1);
}

SpaceTimeField halfline_fd_left(const Eigen::VectorXd& w0, double h, const TimeSeries& g, const TimeSeries& hb,
                                double beta) {
  if (g.size() != hb.size() || g.dt != hb.dt) throw std::invalid_argument("halfline_fd_left: data grids differ");
  return halfline_fd(w0, h, {&g, &hb}, beta, -1);
}

double traveling_wave(double alpha, double beta, double c, double x, double t) {
  if (!(c > beta)) throw std::invalid_argument("traveling_wave: need c > beta");
  const double k = 0.5 * std::sqrt((c - beta) / alpha);
  const double s = 1.0 / std::cosh(k * (x + c * t));
  return 1.5 * (c - beta) * s * s;
}

}  // namespace graphkdv
