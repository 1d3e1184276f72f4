#include "graphkdv/picard.hpp"

#include "graph_spectral.hpp"
#include "graphkdv/line_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace graphkdv {

namespace {

struct Iterate {
  Eigen::MatrixXd right, left;
};

double sup_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double h) {
  double s = 0.0;
  for (int k = 0; k < a.cols(); ++k) s = std::max(s, std::sqrt(h * (a.col(k).squaredNorm() + b.col(k).squaredNorm())));
  return s;
}

}  // namespace

PicardResult picard_solve(const GraphFunction& u0, double Z, double alpha, double beta, const PicardOptions& opt) {
  if (!(alpha > 0.0)) throw std::invalid_argument("picard_solve: alpha must be positive");
  if (!(beta < 0.0)) throw std::invalid_argument("picard_solve: beta must be negative");
  if (Z == 0.0) throw std::invalid_argument("picard_solve: Z must be nonzero");
  if (!(opt.T > 0.0) || !(opt.dt > 0.0)) throw std::invalid_argument("picard_solve: need T > 0 and dt > 0");
  if (opt.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  u0.validate();
  detail::check_symmetric(u0, 1e-12);
  const DomainCheck dc = vertex_condition_residuals(u0, Z);
  if (dc.continuity > opt.compat_tol || dc.first_jump > opt.compat_tol)
    throw std::invalid_argument("picard_solve: initial data violates the vertex conditions");

  const int nt = static_cast<int>(std::llround(opt.T / opt.dt)) + 1;
  std::vector<double> times(nt);
  for (int k = 0; k < nt; ++k) times[k] = k * opt.dt;
  const double ds = alpha * opt.dt;
  const double bt = beta / alpha;
  const double h = u0.grid.h;
  const Eigen::VectorXd wr0 = u0.minus[0] / alpha;
  const Eigen::VectorXd wl0 = u0.plus[0] / alpha;
  // psi is 1 on the window; the optional prefactor is psi_T^2 = 1/T^2 on the window
  const double scale = opt.psi_prefactor ? 1.0 / (opt.T * opt.T) : 1.0;

  auto lambda = [&](const Iterate* prev, std::vector<double>* residual) {
    LineForcing fr, fl;
    if (prev != nullptr && opt.nonlinear) {
      auto make = [&](const Eigen::MatrixXd& field, int direction) -> LineForcing {
        return [&field, direction, scale, &opt](int k, const LineGrid& grid) {
          const Eigen::VectorXd sq = field.col(k).cwiseProduct(field.col(k));
          const Eigen::VectorXd line =
              embed_half_line(grid, sq, direction, opt.ibvp.extension_order, opt.ibvp.extension_width);
          return Eigen::VectorXd(-scale * grid.derivative(line, 1));
        };
      };
      fr = make(prev->right, +1);
      fl = make(prev->left, -1);
    }
    const HalfLineEvolution er = evolve_half_line(wr0, h, +1, nt, ds, bt, opt.ibvp, fr);
    const HalfLineEvolution el = evolve_half_line(wl0, h, -1, nt, ds, bt, opt.ibvp, fl);
    detail::CoupledHalfLines c = detail::couple_vertex(er, el, h, ds, bt, Z, opt.ibvp);
    if (residual != nullptr) *residual = c.residual;
    return Iterate{std::move(c.right), std::move(c.left)};
  };

  PicardResult res;
  std::vector<double> residual;
  Iterate cur = lambda(nullptr, &residual);
  Iterate best = cur;
  std::vector<double> best_residual = residual;
  double best_diff = INFINITY;
  PicardReport& rep = res.report;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::vector<double> r;
    Iterate next = lambda(&cur, &r);
    const double diff = alpha * sup_l2(next.right - cur.right, next.left - cur.left, h);
    const double norm = alpha * sup_l2(next.right, next.left, h);
    rep.differences.push_back(diff);
    if (rep.differences.size() > 1) {
      const double prev = rep.differences[rep.differences.size() - 2];
      rep.ratios.push_back(prev > 0.0 ? diff / prev : 0.0);
    }
    rep.iterations = it;
    cur = std::move(next);
    residual = std::move(r);
    if (diff < best_diff) {
      best_diff = diff;
      best = cur;
      best_residual = residual;
    }
    if (!std::isfinite(diff) || (rep.differences.size() > 1 && diff > 1e3 * rep.differences.front())) {
      rep.divergent = true;
      break;
    }
    if (diff <= opt.tol * (1.0 + norm)) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged) rep.divergent = true;
  const Iterate& out = rep.converged ? cur : best;
  res.field = detail::to_graph_field(u0, out.right, out.left, times, Z, alpha, beta);
  for (double r : (rep.converged ? residual : best_residual)) res.field.vertex_residuals.push_back(alpha * r);
  return res;
}

}  // namespace graphkdv
