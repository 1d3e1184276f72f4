#include "graphkdv/line_ops.hpp"

#include "graphkdv/halfline_potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace graphkdv {

LineGrid::LineGrid(int n, double dy) : n_(n), dy_(dy) {
  if (!is_power_of_two(n) || n < 16) throw std::invalid_argument("line grid: n must be a power of two >= 16");
  if (!(dy > 0.0)) throw std::invalid_argument("line grid: spacing must be positive");
  xi_ = fft_frequencies(n, dy);
}

LineGrid LineGrid::covering(double reach, double dy) {
  const long need = static_cast<long>(std::ceil(2.0 * reach / dy)) + 2;
  return LineGrid(std::max(16, next_power_of_two(need)), dy);
}

std::vector<cplx> LineGrid::forward(const Eigen::VectorXd& w) const {
  if (w.size() != n_) throw std::invalid_argument("line grid: size mismatch");
  std::vector<cplx> s(n_);
  for (int i = 0; i < n_; ++i) s[i] = w[i];
  fft_forward(s);
  return s;
}

Eigen::VectorXd LineGrid::inverse(std::vector<cplx> spec) const {
  fft_inverse(spec);
  Eigen::VectorXd w(n_);
  for (int i = 0; i < n_; ++i) w[i] = spec[i].real();
  return w;
}

double LineGrid::trace(const std::vector<cplx>& spec, int d) const {
  // basis exp(2 pi i i k / n) = exp(i xi_k y_i) (-1)^k
  cplx s = 0.0;
  for (int k = 0; k < n_; ++k) {
    if (d % 2 == 1 && k == n_ / 2) continue;
    const cplx ik(0.0, xi_[k]);
    cplx fac = 1.0;
    for (int j = 0; j < d; ++j) fac *= ik;
    s += (k % 2 == 0 ? 1.0 : -1.0) * fac * spec[k];
  }
  return s.real() / n_;
}

Eigen::VectorXd LineGrid::derivative(const Eigen::VectorXd& w, int d) const {
  std::vector<cplx> s = forward(w);
  for (int k = 0; k < n_; ++k) {
    if (d % 2 == 1 && k == n_ / 2) {
      s[k] = 0.0;
      continue;
    }
    const cplx ik(0.0, xi_[k]);
    cplx fac = 1.0;
    for (int j = 0; j < d; ++j) fac *= ik;
    s[k] *= fac;
  }
  return inverse(std::move(s));
}

void LineGrid::propagate(std::vector<cplx>& spec, double t, double beta) const {
  for (int k = 0; k < n_; ++k) spec[k] *= std::polar(1.0, t * phase(k, beta));
}

FilonWeights filon_weights(double phi_dt) {
  const cplx z(0.0, phi_dt);
  FilonWeights w;
  w.e = std::exp(z);
  if (std::abs(phi_dt) < 0.5) {
    // a = sum z^n (n+1)/(n+2)!, b = sum z^n/(n+2)!
    w.a = 0.0;
    w.b = 0.0;
    cplx zn = 1.0;
    double fact = 2.0;
    for (int n = 0; n <= 12; ++n) {
      w.a += zn * static_cast<double>(n + 1) / fact;
      w.b += zn / fact;
      zn *= z;
      fact *= n + 3;
    }
  } else {
    w.a = (w.e * (z - 1.0) + 1.0) / (z * z);
    w.b = (w.e - 1.0 - z) / (z * z);
  }
  return w;
}

Eigen::VectorXd embed_half_line(const LineGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& half, int direction,
                                int order, double width) {
  const int n = grid.size();
  const int o = grid.origin();
  const int reach = std::min<int>(static_cast<int>(half.size()), o);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < reach; ++j) w[o + direction * j] = half[j];
  // other side: Gaussian-weighted continuation of the boundary jet
  const std::vector<double> ext = jet_extension(half, grid.dy(), o, order, width);
  for (int j = 1; j < o; ++j) w[o - direction * j] = ext[j];
  return w;
}

Eigen::VectorXd restrict_half_line(const LineGrid& grid, const Eigen::VectorXd& w, int direction, int count) {
  const int o = grid.origin();
  if (count > o) throw std::invalid_argument("restrict_half_line: line grid too short");
  Eigen::VectorXd out(count);
  for (int j = 0; j < count; ++j) out[j] = w[o + direction * j];
  return out;
}

}  // namespace graphkdv
