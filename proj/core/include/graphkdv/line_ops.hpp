#pragma once

#include "graphkdv/fft.hpp"

#include <Eigen/Dense>

#include <vector>

namespace graphkdv {

// Periodic grid y_i = (i - n/2) dy, i = 0..n-1; y = 0 sits at index n/2.
class LineGrid {
 public:
  LineGrid(int n, double dy);
  // Power-of-two grid with the same spacing whose half width covers `reach`.
  static LineGrid covering(double reach, double dy);

  int size() const { return n_; }
  int origin() const { return n_ / 2; }
  double dy() const { return dy_; }
  double half_width() const { return 0.5 * n_ * dy_; }
  double y(int i) const { return (i - n_ / 2) * dy_; }
  const std::vector<double>& xi() const { return xi_; }

  std::vector<cplx> forward(const Eigen::VectorXd& w) const;
  Eigen::VectorXd inverse(std::vector<cplx> spec) const;

  // d-th spectral derivative evaluated at y = 0.
  double trace(const std::vector<cplx>& spec, int d) const;
  // d-th spectral derivative on the whole grid.
  Eigen::VectorXd derivative(const Eigen::VectorXd& w, int d) const;

  // Airy phase xi^3 - beta xi: S(t) multiplies the spectrum by exp(i t phase).
  double phase(int k, double beta) const { return xi_[k] * xi_[k] * xi_[k] - beta * xi_[k]; }
  void propagate(std::vector<cplx>& spec, double t, double beta) const;

 private:
  int n_;
  double dy_;
  std::vector<double> xi_;
};

// Exact-exponential weights for one step of v' = i phi v + F with F linear on the step:
// v1 = e v0 + dt (a F0 + b F1), z = i phi dt.
struct FilonWeights {
  cplx e, a, b;
};
FilonWeights filon_weights(double phi_dt);

// Places half-line samples (distance j dy from the origin, direction +1 for y > 0, -1 for y < 0)
// on the periodic grid and fills the other side with a Gaussian-weighted continuation of the boundary jet.
Eigen::VectorXd embed_half_line(const LineGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& half, int direction,
                                int extension_order, double width = 1.0);

// Samples of a line function along one half-line, distances 0..count-1.
Eigen::VectorXd restrict_half_line(const LineGrid& grid, const Eigen::VectorXd& w, int direction, int count);

}  // namespace graphkdv
