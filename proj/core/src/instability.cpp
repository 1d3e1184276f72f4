#include "graphkdv/instability.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace graphkdv {

// ---------------------------------------------------------------- E

int LinearizedOperator::index(Side side, int k, int j) const {
  const int per = grid.m - 2;
  const int e = side == Side::minus ? k : graph.n_minus + k;
  return 1 + e * per + (j - 1);
}

Eigen::VectorXd LinearizedOperator::reduce(const GraphFunction& f) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(reduced_size());
  double vertex = 0.0;
  for (Side s : {Side::minus, Side::plus}) {
    const int count = s == Side::minus ? graph.n_minus : graph.n_plus;
    for (int k = 0; k < count; ++k) {
      const Eigen::VectorXd& e = f.edge(s, k);
      vertex += e[0];
      for (int j = 1; j <= grid.m - 2; ++j) v[index(s, k, j)] = e[j];
    }
  }
  v[0] = vertex / graph.edge_count();
  return v;
}

GraphFunction LinearizedOperator::expand(const Eigen::VectorXd& v) const {
  GraphFunction f(graph, grid);
  for (Side s : {Side::minus, Side::plus}) {
    const int count = s == Side::minus ? graph.n_minus : graph.n_plus;
    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd& e = f.edge(s, k);
      e[0] = v[0];
      for (int j = 1; j <= grid.m - 2; ++j) e[j] = v[index(s, k, j)];
      e[grid.m - 1] = 0.0;
    }
  }
  return f;
}

double LinearizedOperator::asymmetry() const {
  const Eigen::VectorXd s = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = s.asDiagonal() * Eigen::MatrixXd(stiffness) * s.asDiagonal();
  const double nrm = S.norm();
  return nrm > 0.0 ? (S - S.transpose()).norm() / nrm : 0.0;
}

double LinearizedOperator::flux_sum_residual(const GraphFunction& f) const {
  const double h = grid.h;
  double sum = 0.0;
  double vertex = 0.0;
  for (Side s : {Side::minus, Side::plus}) {
    const int count = s == Side::minus ? graph.n_minus : graph.n_plus;
    for (int k = 0; k < count; ++k) {
      const Eigen::VectorXd& e = f.edge(s, k);
      sum += (-3.0 * e[0] + 4.0 * e[1] - e[2]) / (2.0 * h);
      vertex += e[0];
    }
  }
  vertex /= graph.edge_count();
  return std::abs(sum - params.Z * graph.pairs() * vertex);
}

LinearizedOperator build_E(const ProfileParams& p, const GraphGrid& grid, const GraphFunction& profile) {
  p.validate();
  profile.validate();
  if (grid.m < 4) throw std::invalid_argument("build_E: need at least 4 nodes per edge");
  if (profile.grid.m != grid.m || profile.grid.h != grid.h) throw std::invalid_argument("build_E: profile grid mismatch");
  LinearizedOperator op;
  op.params = p;
  op.graph = profile.graph;
  op.grid = grid;
  op.profile = profile;
  const int per = grid.m - 2;
  const int edges = op.graph.edge_count();
  const int n = 1 + edges * per;
  const double h = grid.h;
  const double a = p.alpha;
  const int pairs = op.graph.pairs();

  op.mass = Eigen::VectorXd::Constant(n, h);
  op.mass[0] = pairs * h;
  std::vector<Eigen::Triplet<double>> trips;
  double phi0 = 0.0;
  for (Side s : {Side::minus, Side::plus}) {
    const int count = s == Side::minus ? op.graph.n_minus : op.graph.n_plus;
    for (int k = 0; k < count; ++k) phi0 += profile.edge(s, k)[0];
  }
  phi0 /= edges;
  // vertex row: ghosts eliminated through the flux-sum condition
  trips.emplace_back(0, 0, a * edges / h + a * p.Z * pairs + pairs * h * (-p.beta - 2.0 * phi0));
  for (Side s : {Side::minus, Side::plus}) {
    const int count = s == Side::minus ? op.graph.n_minus : op.graph.n_plus;
    for (int k = 0; k < count; ++k) {
      const Eigen::VectorXd& phi = profile.edge(s, k);
      trips.emplace_back(0, op.index(s, k, 1), -a / h);
      for (int j = 1; j <= per; ++j) {
        const int r = op.index(s, k, j);
        trips.emplace_back(r, r, 2.0 * a / h + h * (-p.beta - 2.0 * phi[j]));
        trips.emplace_back(r, j == 1 ? 0 : op.index(s, k, j - 1), -a / h);
        if (j < per) trips.emplace_back(r, op.index(s, k, j + 1), -a / h);
      }
    }
  }
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(trips.begin(), trips.end());
  op.E = op.mass.cwiseInverse().asDiagonal() * op.stiffness;
  return op;
}

// ---------------------------------------------------------------- NE

NEOperator build_NE(const ProfileParams& p, const GraphFunction& profile, const NEOptions& opt) {
  p.validate();
  DiscretizationOptions dopt = opt.disc;
  dopt.variant = opt.variant;
  GraphDiscretization disc(profile.graph, profile.grid, p.Z, dopt);
  const Eigen::VectorXd phi = disc.pack(profile);
  SpMat A = disc.linearized_operator(p.alpha, p.beta, phi);
  if (opt.with_sponge) {
    const SpMat S = disc.projection() * SpMat(disc.sponge().asDiagonal()) * disc.projection();
    A = A - S;
  }
  return NEOperator{p, std::move(disc), phi, std::move(A), opt.with_sponge};
}

NEOperator build_NE(const LinearizedOperator& E, const NEOptions& opt) { return build_NE(E.params, E.profile, opt); }

namespace {

// orthonormal basis of ker C
Eigen::MatrixXd kernel_basis(const SpMat& C) {
  const Eigen::MatrixXd Ct = Eigen::MatrixXd(C).transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ct);
  const int rank = static_cast<int>(qr.rank());
  const Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(Ct.rows() - rank);
}

double spectrum_distance(const std::vector<std::complex<double>>& ev, std::complex<double> z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : ev) best = std::min(best, std::abs(e - z));
  return best;
}

struct Refined {
  bool ok = false;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXd v;
};

double h_norm(const GraphDiscretization& disc, const Eigen::VectorXd& v) { return disc.l2_norm(v); }

Eigen::VectorXd start_vector(const GraphDiscretization& disc) {
  Eigen::VectorXd v(disc.size());
  for (int i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.3 * std::sin(0.7 * i) + 0.1 * std::cos(1.3 * i);
  return disc.project(v);
}

// shift-invert iteration on M (A or its transpose) with Rayleigh shift updates
Refined shift_invert(const SpMat& M, const GraphDiscretization& disc, double mu, const EigenOptions& opt,
                     const Eigen::VectorXd& start) {
  const int n = static_cast<int>(M.rows());
  SpMat I(n, n);
  I.setIdentity();
  Refined best;
  Eigen::VectorXd v = start / h_norm(disc, start);
  double shift = mu;
  for (int round = 0; round < 4; ++round) {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(M - shift * I);
    if (lu.info() != Eigen::Success) {
      shift *= 1.0 + 1e-10;
      continue;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.max_iter; ++it) {
      Eigen::VectorXd w = lu.solve(v);
      const double nw = h_norm(disc, w);
      if (!std::isfinite(nw) || nw == 0.0) break;
      v = w / nw;
      const Eigen::VectorXd Mv = M * v;
      const double lam = disc.dot(v, Mv) / disc.dot(v, v);
      const double res = h_norm(disc, Mv - lam * v);
      if (res < best.residual) {
        best.residual = res;
        best.lambda = lam;
        best.v = v;
      }
      if (res < 1e-3 * opt.residual_tol) break;
      if (it > 5 && res > 0.9 * prev) break;
      prev = res;
    }
    if (best.residual < 1e-3 * opt.residual_tol) break;
    if (std::abs(best.lambda - shift) < 1e-14 * (1.0 + std::abs(shift))) break;
    shift = best.lambda;
    v = best.v;
  }
  best.ok = best.residual < opt.residual_tol && std::isfinite(best.lambda);
  return best;
}

// shift-invert with the complex shift i omega; returns the real part of the converged vector
Eigen::VectorXd imaginary_mode(const SpMat& A, const GraphDiscretization& disc, double omega) {
  using CSpMat = Eigen::SparseMatrix<std::complex<double>>;
  const int n = static_cast<int>(A.rows());
  CSpMat M = A.cast<std::complex<double>>();
  CSpMat shift(n, n);
  shift.setIdentity();
  M -= std::complex<double>(0.0, omega) * shift;
  Eigen::SparseLU<CSpMat> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw std::runtime_error("imaginary_mode: factorization failed");
  Eigen::VectorXcd v = start_vector(disc).cast<std::complex<double>>();
  for (int it = 0; it < 60; ++it) {
    v = lu.solve(v);
    v /= v.norm();
  }
  // rotate so the real part carries most of the vector
  Eigen::Index imax;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::conj(v[imax]) / std::abs(v[imax]);
  return disc.project(v.real());
}

NEOperator ne_on_grid(const ProfileParams& p, const StarGraph& graph, const GraphGrid& grid, const EigenOptions& opt) {
  const GraphFunction prof = opt.source == ProfileSource::UZ ? build_UZ(p, grid, graph) : GraphFunction(graph, grid);
  return build_NE(p, prof, opt.ne);
}

}  // namespace

std::vector<std::complex<double>> dense_spectrum(const NEOperator& ne) {
  const Eigen::MatrixXd Q = kernel_basis(ne.disc.constraints());
  const Eigen::MatrixXd B = Q.transpose() * (ne.A * Q);
  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_spectrum: eigensolver failed");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); });
  return ev;
}

SpectralResult unstable_eigenpair(const ProfileParams& p, const StarGraph& graph, const GraphGrid& grid,
                                  const EigenOptions& opt) {
  p.validate();
  if (!(opt.coarse_h > 0.0)) throw std::invalid_argument("unstable_eigenpair: coarse_h must be positive");
  SpectralResult res;
  res.h = grid.h;
  res.L = grid.L;
  const GraphGrid coarse = GraphGrid::with_step(grid.L, std::max(opt.coarse_h, grid.h));
  const NEOperator ne_c = ne_on_grid(p, graph, coarse, opt);
  res.eigenvalues = dense_spectrum(ne_c);

  for (const auto& z : res.eigenvalues) {
    res.conjugate_pairing = std::max(res.conjugate_pairing, spectrum_distance(res.eigenvalues, std::conj(z)));
    if (std::abs(z) < 10.0)
      res.hamiltonian_symmetry = std::max(res.hamiltonian_symmetry, spectrum_distance(res.eigenvalues, -std::conj(z)));
  }
  std::vector<double> candidates;
  for (const auto& z : res.eigenvalues)
    if (z.real() > opt.floor && std::abs(z.imag()) < opt.imag_tol * (1.0 + std::abs(z.real()))) candidates.push_back(z.real());
  res.coarse_real_positive = static_cast<int>(candidates.size());
  if (candidates.empty()) {
    res.message = "no real eigenvalue with positive real part in the coarse spectrum";
    return res;
  }

  const NEOperator ne_h = ne_on_grid(p, graph, grid, opt);
  const GraphGrid half = GraphGrid::with_step(grid.L, 0.5 * grid.h);
  const NEOperator ne_h2 = ne_on_grid(p, graph, half, opt);
  const Eigen::VectorXd s_h = start_vector(ne_h.disc);
  const Eigen::VectorXd s_h2 = start_vector(ne_h2.disc);
  std::ostringstream notes;
  for (double mu : candidates) {
    const Refined a = shift_invert(ne_h.A, ne_h.disc, mu, opt, s_h);
    if (!a.ok || !(a.lambda > opt.floor)) {
      notes << "candidate " << mu << " not confirmed on grid h; ";
      continue;
    }
    if (res.found && a.lambda <= res.lambda) continue;
    const Refined b = shift_invert(ne_h2.A, ne_h2.disc, a.lambda, opt, s_h2);
    if (!b.ok) {
      notes << "candidate " << a.lambda << " not confirmed on grid h/2; ";
      continue;
    }
    res.found = true;
    res.lambda = a.lambda;
    res.lambda_half = b.lambda;
    res.residual = a.residual;
    res.psi = a.v;
  }
  if (!res.found) {
    res.message = "no candidate passed the residual test: " + notes.str();
    return res;
  }
  res.ladder_rel_diff = std::abs(res.lambda - res.lambda_half) / std::abs(res.lambda_half);
  res.ladder_converged = res.ladder_rel_diff <= opt.ladder_tol;
  // sign: positive at the vertex (or at the largest entry)
  const int v0 = ne_h.disc.offset(Side::plus, 0);
  double ref = res.psi[v0];
  if (std::abs(ref) < 1e-8 * res.psi.cwiseAbs().maxCoeff()) {
    Eigen::Index imax;
    res.psi.cwiseAbs().maxCoeff(&imax);
    ref = res.psi[imax];
  }
  if (ref < 0.0) res.psi = -res.psi;
  res.psi /= ne_h.disc.l2_norm(res.psi);
  res.psi_function = ne_h.disc.unpack(res.psi);
  if (!res.ladder_converged) res.message = "lambda not grid-stable across (h, h/2)";
  return res;
}

// ---------------------------------------------------------------- flows

GraphField linearized_flow(const GraphFunction& psi0, const NEOperator& ne, const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0) throw std::invalid_argument("linearized_flow: times must start at 0");
  const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
  for (std::size_t k = 1; k < times.size(); ++k)
    if (std::abs(times[k] - k * dt) > 1e-9 * (1.0 + times[k])) throw std::invalid_argument("linearized_flow: times must be uniform");
  if (times.size() > 1 && !(dt > 0.0)) throw std::invalid_argument("linearized_flow: times must increase");
  const int n = ne.disc.size();
  SpMat I(n, n);
  I.setIdentity();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(I - 0.5 * dt * ne.A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("linearized_flow: factorization failed");
  const SpMat rhs = I + 0.5 * dt * ne.A;
  GraphField gf;
  gf.Z = ne.params.Z;
  gf.alpha = ne.params.alpha;
  gf.beta = ne.params.beta;
  gf.convention = "V_t = NE V";
  Eigen::VectorXd v = ne.disc.project(ne.disc.pack(psi0));
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) v = ne.disc.project(lu.solve(rhs * v));
    gf.times.push_back(times[k]);
    gf.states.push_back(ne.disc.unpack(v));
    gf.l2_norms.push_back(ne.disc.l2_norm(v));
    gf.vertex_residuals.push_back(ne.disc.constraint_residual(v));
  }
  gf.stop_time = times.back();
  return gf;
}

SteadyState discrete_steady_state(const GraphDiscretization& disc, double alpha, double beta, const Eigen::VectorXd& guess,
                                  bool with_sponge, double tol, int max_iter) {
  const int n = disc.size();
  const SpMat& P = disc.projection();
  SpMat I(n, n);
  I.setIdentity();
  const SpMat A = disc.linear_operator(alpha, beta, with_sponge);
  const SpMat S = P * SpMat(disc.sponge().asDiagonal()) * P;
  SteadyState st;
  const Eigen::VectorXd start = disc.project(guess);
  st.u = start;
  auto residual = [&](const Eigen::VectorXd& u) { return (A * u + disc.nonlinear_term(u)).cwiseAbs().maxCoeff(); };
  double r = residual(st.u);
  for (st.iterations = 0; st.iterations < max_iter; ++st.iterations) {
    const Eigen::VectorXd F = A * st.u + disc.nonlinear_term(st.u);
    SpMat J = disc.linearized_operator(alpha, beta, st.u);
    if (with_sponge) J = J - S;
    // J + (I - P) is invertible on ker C exactly when J is, and keeps the step inside ker C
    const SpMat K = J + I - P;
    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success) throw std::runtime_error("discrete_steady_state: singular Jacobian");
    const Eigen::VectorXd step = lu.solve(-F);
    // damped: accept the longest of 1, 1/2, 1/4, ... that lowers the residual
    double theta = 1.0;
    Eigen::VectorXd trial;
    double rt = 0.0;
    for (int k = 0; k < 8; ++k, theta *= 0.5) {
      trial = disc.project(st.u + theta * step);
      rt = residual(trial);
      if (rt < r) break;
    }
    if (!(rt < r)) break;
    st.u = trial;
    r = rt;
    if (theta * step.cwiseAbs().maxCoeff() <= tol * (1.0 + st.u.cwiseAbs().maxCoeff())) {
      ++st.iterations;
      break;
    }
  }
  st.residual = (A * st.u + disc.nonlinear_term(st.u)).cwiseAbs().maxCoeff();
  st.distance = disc.h1_norm(st.u - start);
  return st;
}

// ---------------------------------------------------------------- experiments

GrowthFit fit_growth(const std::vector<double>& times, const std::vector<double>& deviations, double dt) {
  if (times.size() != deviations.size() || times.empty()) throw std::invalid_argument("fit_growth: size mismatch");
  GrowthFit g;
  g.times = times;
  g.deviations = deviations;
  g.initial_deviation = deviations.front();
  std::vector<double> x, y;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 2.0 * dt - 1e-12) continue;
    if (!(deviations[k] < 10.0 * g.initial_deviation) || !(deviations[k] > 0.0)) break;
    x.push_back(times[k]);
    y.push_back(std::log(deviations[k]));
  }
  g.window_points = static_cast<int>(x.size());
  if (x.size() < 3) {
    g.message = "fit window has fewer than 3 points";
    return g;
  }
  g.t_a = x.front();
  g.t_b = x.back();
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  g.lambda_fit = sxy / sxx;
  g.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  g.ok = true;
  return g;
}

GrowthFit instability_experiment(const ProfileParams& p, const StarGraph& graph, const GraphGrid& grid,
                                 const InstabilityOptions& opt) {
  p.validate();
  if (!(opt.delta > 0.0)) throw std::invalid_argument("instability_experiment: delta must be positive");
  if (!(opt.dt > 0.0) || opt.store_every < 1) throw std::invalid_argument("instability_experiment: bad time step");
  const SpectralResult sr = unstable_eigenpair(p, graph, grid, opt.eigen);
  if (!sr.found) {
    GrowthFit g;
    g.message = "no unstable eigenpair: " + sr.message;
    return g;
  }
  DiscretizationOptions dopt = opt.fd.disc;
  dopt.variant = opt.eigen.ne.variant;
  const GraphDiscretization disc(graph, grid, p.Z, dopt);
  const GraphFunction uz = build_UZ(p, grid, graph);
  const Eigen::VectorXd uz_v = disc.project(disc.pack(uz));
  Eigen::VectorXd base = uz_v;
  if (opt.refine_base) base = discrete_steady_state(disc, p.alpha, p.beta, uz_v, opt.fd.sponge).u;

  Eigen::VectorXd dir = sr.psi;
  if (opt.direction == PerturbationDirection::stable_control) {
    // real part of the eigenvector nearest i omega: a mode of the imaginary spectrum
    const NEOperator ne = ne_on_grid(p, graph, grid, opt.eigen);
    dir = imaginary_mode(ne.A, disc, opt.control_frequency);
  }
  const double scale = opt.delta * sobolev_norm(uz, 1) / sobolev_norm(disc.unpack(dir), 1);
  const Eigen::VectorXd u0 = base + scale * dir;

  FdOptions fo = opt.fd;
  fo.dt = opt.dt;
  fo.store_every = opt.store_every;
  fo.disc = dopt;
  fo.T = opt.T > 0.0 ? opt.T : 1.2 * std::log(10.0) / sr.lambda;
  fo.T = std::ceil(fo.T / (opt.dt * opt.store_every) - 1e-9) * opt.dt * opt.store_every;
  const FdResult fr = fd_solve(disc.unpack(u0), p.Z, p.alpha, p.beta, fo);

  const GraphFunction base_fn = disc.unpack(base);
  std::vector<double> dev;
  for (const auto& s : fr.field.states) dev.push_back(sobolev_norm(s - base_fn, 1));
  GrowthFit g = fit_growth(fr.field.times, dev, opt.dt);
  g.lambda = sr.lambda;
  g.ratio = g.lambda_fit / sr.lambda;
  g.base_drift = disc.h1_norm(base - uz_v);
  g.blew_up = fr.field.blew_up;
  if (g.blew_up) {
    g.message = "solver blew up at t=" + std::to_string(fr.field.stop_time) + (g.message.empty() ? "" : "; " + g.message);
    g.ok = false;
  }
  return g;
}

ConsistencyReport linearization_consistency(const ProfileParams& p, const GraphFunction& phi, const GraphFunction& psi,
                                            const ConsistencyOptions& opt) {
  p.validate();
  if (opt.eps.size() < 2) throw std::invalid_argument("linearization_consistency: need at least two eps values");
  DiscretizationOptions dopt = opt.ne.disc;
  dopt.variant = opt.ne.variant;
  const GraphDiscretization disc(phi.graph, phi.grid, p.Z, dopt);
  Eigen::VectorXd base = disc.project(disc.pack(phi));
  if (opt.refine_steady) base = discrete_steady_state(disc, p.alpha, p.beta, base, opt.ne.with_sponge).u;
  const Eigen::VectorXd dir = disc.project(disc.pack(psi));
  const GraphFunction base_fn = disc.unpack(base);

  FdOptions fo;
  fo.T = opt.T;
  fo.dt = opt.dt;
  fo.store_every = std::max(1, static_cast<int>(std::llround(opt.T / opt.dt)));
  fo.sponge = opt.ne.with_sponge;
  fo.disc = dopt;
  const GraphFunction ref = fd_solve(base_fn, p.Z, p.alpha, p.beta, fo).field.states.back();

  const NEOperator ne = build_NE(p, base_fn, opt.ne);
  const int steps = static_cast<int>(std::llround(opt.T / opt.dt));
  std::vector<double> times(steps + 1);
  for (int k = 0; k <= steps; ++k) times[k] = k * opt.dt;
  const GraphFunction V = linearized_flow(disc.unpack(dir), ne, times).states.back();

  ConsistencyReport rep;
  rep.eps = opt.eps;
  GraphFunction last_q;
  for (double e : opt.eps) {
    const GraphFunction out = fd_solve(disc.unpack(base + e * dir), p.Z, p.alpha, p.beta, fo).field.states.back();
    const GraphFunction q = (1.0 / e) * (out - ref);
    rep.D.push_back(sobolev_norm(q - V, 1));
    last_q = q;
  }
  const double nq = std::sqrt(inner_product(last_q, last_q));
  const double nv = std::sqrt(inner_product(V, V));
  rep.cosine = nq > 0.0 && nv > 0.0 ? inner_product(last_q, V) / (nq * nv) : 1.0;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    if (rep.D[i] > 0.0) {
      x.push_back(std::log(rep.eps[i]));
      y.push_back(std::log(rep.D[i]));
    }
  if (x.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i] / x.size();
      my += y[i] / x.size();
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    rep.slope = sxy / sxx;
  }
  rep.ok = rep.slope >= 0.8 && rep.slope <= 1.2;
  return rep;
}

}  // namespace graphkdv
