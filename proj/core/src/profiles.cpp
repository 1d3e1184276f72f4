#include "graphkdv/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace graphkdv {

const char* to_string(ProfileKind k) { return k == ProfileKind::Bump ? "bump" : "tail"; }

ProfileParams::ProfileParams(double a, double b, double z) : alpha(a), beta(b), Z(z) { validate(); }

void ProfileParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("profile: alpha must be positive");
  if (!(beta < 0.0)) throw std::invalid_argument("profile: beta must be negative");
  if (Z == 0.0 || !std::isfinite(Z)) throw std::invalid_argument("profile: Z must be nonzero");
  if (!(omega() > 0.25 * Z * Z)) throw std::invalid_argument("profile: need omega > Z^2/4");
}

double ProfileParams::shift() const {
  const double t = Z / (2.0 * std::sqrt(omega()));
  if (!(std::abs(t) < 1.0)) throw std::invalid_argument("profile: artanh argument outside (-1,1)");
  return 0.5 * std::log((1.0 + t) / (1.0 - t));
}

double solitary_wave(double c, double xi) {
  if (!(c > 1.0)) throw std::invalid_argument("solitary_wave: c must exceed 1");
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(c - 1.0) * xi);
  return 1.5 * (c - 1.0) * s * s;
}

namespace {

double plus_profile(const ProfileParams& p, double x) {
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(p.omega()) * x - p.shift());
  return -1.5 * p.beta * s * s;
}

}  // namespace

double half_soliton(const ProfileParams& p, Side side, double x) {
  if (side == Side::plus && x < 0.0) throw std::invalid_argument("half_soliton: plus side needs x >= 0");
  if (side == Side::minus && x > 0.0) throw std::invalid_argument("half_soliton: minus side needs x <= 0");
  return plus_profile(p, side == Side::plus ? x : -x);
}

double half_soliton_derivative(const ProfileParams& p, double x, int order) {
  // phi = A sech^2(k x - a), A = -3 beta / 2, k = sqrt(omega)/2
  const double A = -1.5 * p.beta;
  const double k = 0.5 * std::sqrt(p.omega());
  const double y = k * x - p.shift();
  const double T = std::tanh(y);
  const double S2 = 1.0 - T * T;
  switch (order) {
    case 0: return A * S2;
    case 1: return -2.0 * A * k * S2 * T;
    case 2: return 2.0 * A * k * k * S2 * (3.0 * T * T - 1.0);
    case 3: return -8.0 * A * k * k * k * S2 * T * (3.0 * T * T - 2.0);
    default: throw std::invalid_argument("half_soliton_derivative: order must be 0..3");
  }
}

double profile_vertex_value(const ProfileParams& p) { return plus_profile(p, 0.0); }

double profile_max_value(const ProfileParams& p) {
  return p.Z > 0 ? -1.5 * p.beta : plus_profile(p, 0.0);
}

GraphFunction build_UZ(const ProfileParams& p, const GraphGrid& grid, const StarGraph& graph) {
  p.validate();
  GraphFunction f(graph, grid);
  Eigen::VectorXd e(grid.m);
  for (int j = 0; j < grid.m; ++j) e[j] = plus_profile(p, j * grid.h);
  for (auto& v : f.plus) v = e;
  for (auto& v : f.minus) v = e;
  return f;
}

GraphFunction elliptic_residual(const GraphFunction& f, double alpha, double beta) {
  if (f.grid.m < 5) throw std::invalid_argument("elliptic_residual: need m >= 5");
  GraphFunction r(f.graph, f.grid);
  const double h2 = f.grid.h * f.grid.h;
  auto one = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    for (int j = 1; j + 1 < f.grid.m; ++j)
      out[j] = alpha * (v[j + 1] - 2.0 * v[j] + v[j - 1]) / h2 + beta * v[j] + v[j] * v[j];
  };
  for (size_t k = 0; k < f.plus.size(); ++k) one(f.plus[k], r.plus[k]);
  for (size_t k = 0; k < f.minus.size(); ++k) one(f.minus[k], r.minus[k]);
  return r;
}

double default_truncation_length(const ProfileParams& p) { return 40.0 / std::sqrt(p.omega()); }

}  // namespace graphkdv
