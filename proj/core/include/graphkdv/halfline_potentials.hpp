#pragma once

#include "graphkdv/line_ops.hpp"
#include "graphkdv/spectral_kernels.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace graphkdv {

struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double time(int k) const { return t0 + k * dt; }
  void validate() const;  // uniform grid, N >= 16, finite
};

// Rows: spatial nodes, columns: time samples.
struct SpaceTimeField {
  std::vector<double> x;
  double t0 = 0.0;
  double dt = 1.0;
  Eigen::MatrixXd values;

  int nx() const { return static_cast<int>(values.rows()); }
  int nt() const { return static_cast<int>(values.cols()); }
};

enum class PotentialKind { R, L1, L2 };

// Root triples on the DFT frequency grid of an n-sample window with spacing dt. With damping
// sigma > 0 the roots sit on the shifted contour sigma + i tau (signals carry e^{-sigma t}).
class FrequencyGrid {
 public:
  FrequencyGrid(int n, double dt, double beta, double damping = 0.0);
  int size() const { return static_cast<int>(taus_.size()); }
  double dt() const { return dt_; }
  double beta() const { return beta_; }
  double damping() const { return damping_; }
  const std::vector<double>& taus() const { return taus_; }
  const RootTriple& roots(int k) const { return roots_[k]; }

  // d-th x-derivative of the potential multiplier at x (x >= 0 for R, x <= 0 for L1, L2).
  cplx multiplier(PotentialKind kind, int k, double x, int d) const;
  // Closed-form vertex traces: R (1, r0, r0^2), L1 (1, 0, -r1 r2), L2 (0, 1, r1 + r2).
  cplx trace_multiplier(PotentialKind kind, int k, int d) const;

 private:
  double dt_;
  double beta_;
  double damping_;
  std::vector<double> taus_;
  std::vector<RootTriple> roots_;
};

std::vector<cplx> spectrum(const std::vector<double>& signal);
std::vector<double> real_signal(std::vector<cplx> spec);

// Field of one potential at a list of x positions; the input series is treated as one period.
SpaceTimeField potential_field(PotentialKind kind, const TimeSeries& input, const std::vector<double>& xs, double beta,
                               int d = 0);
TimeSeries potential_R(const TimeSeries& h, double x, double beta);
TimeSeries potential_L1(const TimeSeries& f, double x, double beta);
TimeSeries potential_L2(const TimeSeries& g, double x, double beta);
TimeSeries potential_traces(PotentialKind kind, const TimeSeries& input, double beta, int d);

struct SigmaExtension {
  int n = 0;
  std::vector<double> c;
  std::vector<double> nodes;  // mu_k; the extension uses f(-mu_k x)
};

// Coefficients with sum_k c_k (-mu_k)^d = 1 for d = 0..n, mu_k = 2^-k.
SigmaExtension sigma_coefficients(int n);
// Same system on arbitrary positive nodes.
SigmaExtension reflection_coefficients(const std::vector<double>& nodes);
// sigma(x; p): e^{p x} for x >= 0, sum c_k e^{-p mu_k x} for x < 0; d-th derivative.
double sigma_eval(const SigmaExtension& s, double p, double x, int d = 0);

// Extension of half-line samples (index j <-> distance j h from the boundary) to the other side:
// a function with the same n-jet at the boundary (one-sided stencil estimates) of the form
// polynomial times exp(-(x/width)^2). Returns samples at distances j h on the other side, j = 0..count-1.
std::vector<double> jet_extension(const Eigen::Ref<const Eigen::VectorXd>& half, double h, int count, int n = 5,
                                  double width = 1.0);

// Smooth cutoff equal to 1 on [-1,1], 0 outside [-2,2], C-infinity in between.
double smooth_cutoff(double t);

struct IbvpOptions {
  int pad_factor = 4;        // DFT window = pad_factor times the data support
  double taper_fraction = 0.5;  // smooth roll-off after T as a fraction of T
  int extension_order = 5;
  double extension_width = 1.0;
  // contour shift sigma = damping_factor / window length; wraparound is suppressed by e^{-damping_factor}
  double damping_factor = 18.0;
  double corner_tol = 1e-8;
};

// Time sample layout shared by the half-line solvers: data lives on [0, T] with nt samples;
// the causal window is zero before 0, tapered after T and periodized over n_fft samples.
struct CausalWindow {
  int nt = 0;
  int taper = 0;
  int n_fft = 0;
  double dt = 0.0;
  double damping = 0.0;
  static CausalWindow make(int nt, double dt, const IbvpOptions& opt);
  // Window samples times e^{-damping t}.
  std::vector<double> embed(const std::vector<double>& samples) const;
};

// Periodic line grid used to evolve m half-line samples with spacing h.
LineGrid half_line_grid(int m, double h);

// Line-grid samples of a forcing term at time index k.
using LineForcing = std::function<Eigen::VectorXd(int, const LineGrid&)>;

struct HalfLineEvolution {
  Eigen::MatrixXd field;                     // m x nt, restricted to the half-line
  std::array<std::vector<double>, 3> traces;  // y-derivatives 0..2 at the boundary
};

// Whole-line evolution of extended half-line data (direction +1: y >= 0, -1: y <= 0), plus the
// Duhamel integral of an optional forcing (exact exponential weights, forcing linear per step).
HalfLineEvolution evolve_half_line(const Eigen::VectorXd& data, double h, int direction, int nt, double dt,
                                   double beta, const IbvpOptions& opt = {}, const LineForcing& forcing = {});

// Adds the potential of a (damped) causal-window spectrum at nodes j h along `direction`.
void add_potential(Eigen::MatrixXd& field, PotentialKind kind, const std::vector<cplx>& window_spectrum,
                   const FrequencyGrid& fg, double h, int direction);
// d-th x-derivative of the same potential at x = 0, first nt samples, from the kernel multiplier.
std::vector<double> potential_boundary_trace(PotentialKind kind, const std::vector<cplx>& window_spectrum,
                                             const FrequencyGrid& fg, int nt, int d);

struct IbvpResult {
  SpaceTimeField field;
  bool corner_warning = false;
  double corner_mismatch = 0.0;
};

// Right half-line x >= 0, one condition u(0,t) = f(t). v0 samples at x = j h.
IbvpResult linear_ibvp_right(const Eigen::VectorXd& v0, double h, const TimeSeries& f, double beta,
                             const IbvpOptions& opt = {});
// Left half-line x <= 0, w(0,t) = g(t), w_x(0,t) = hb(t). w0 samples at x = -j h.
IbvpResult linear_ibvp_left(const Eigen::VectorXd& w0, double h, const TimeSeries& g, const TimeSeries& hb,
                            double beta, const IbvpOptions& opt = {});

}  // namespace graphkdv
