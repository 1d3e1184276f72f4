#include "graphkdv/graph_operator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace graphkdv {

const char* to_string(VertexVariant v) { return v == VertexVariant::AZ ? "AZ" : "energy"; }

namespace {

using Trip = Eigen::Triplet<double>;

constexpr double kBoundary[4][6] = {{-24.0 / 17, 59.0 / 34, -4.0 / 17, -3.0 / 34, 0.0, 0.0},
                                    {-0.5, 0.0, 0.5, 0.0, 0.0, 0.0},
                                    {4.0 / 43, -59.0 / 86, 0.0, 59.0 / 86, -4.0 / 43, 0.0},
                                    {3.0 / 98, 0.0, -59.0 / 98, 0.0, 32.0 / 49, -4.0 / 49}};
constexpr double kNorm[4] = {17.0 / 48, 59.0 / 48, 43.0 / 48, 49.0 / 48};

SpMat block_diag(const std::vector<SpMat>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.rows());
  std::vector<Trip> t;
  int off = 0;
  for (const auto& b : blocks) {
    for (int k = 0; k < b.outerSize(); ++k)
      for (SpMat::InnerIterator it(b, k); it; ++it) t.emplace_back(off + it.row(), off + it.col(), it.value());
    off += static_cast<int>(b.rows());
  }
  SpMat out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::RowVectorXd sparse_row(const SpMat& A, int r) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(A.cols());
  const SpMat rowmat = A.row(r);
  for (int k = 0; k < rowmat.outerSize(); ++k)
    for (SpMat::InnerIterator it(rowmat, k); it; ++it) row[it.col()] = it.value();
  return row;
}

}  // namespace

SpMat sbp_first_derivative(int m, double h) {
  if (m < 8) throw std::invalid_argument("sbp operator needs at least 8 nodes");
  std::vector<Trip> t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j)
      if (kBoundary[i][j] != 0.0) {
        t.emplace_back(i, j, kBoundary[i][j] / h);
        t.emplace_back(m - 1 - i, m - 1 - j, -kBoundary[i][j] / h);
      }
  const double c[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (int i = 4; i < m - 4; ++i)
    for (int k = -2; k <= 2; ++k)
      if (c[k + 2] != 0.0) t.emplace_back(i, i + k, c[k + 2] / h);
  SpMat D(m, m);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

Eigen::VectorXd sbp_norm(int m, double h) {
  if (m < 8) throw std::invalid_argument("sbp operator needs at least 8 nodes");
  Eigen::VectorXd H = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < 4; ++i) {
    H[i] = kNorm[i];
    H[m - 1 - i] = kNorm[i];
  }
  return H * h;
}

GraphDiscretization::GraphDiscretization(const StarGraph& graph, const GraphGrid& grid, double Z,
                                         const DiscretizationOptions& opt)
    : graph_(graph), grid_(grid), Z_(Z), opt_(opt) {
  if (!(opt.sponge_fraction >= 0.0 && opt.sponge_fraction < 0.5)) throw std::invalid_argument("sponge fraction must be in [0, 0.5)");
  if (!(opt.sponge_strength >= 0.0)) throw std::invalid_argument("sponge strength must be >= 0");
  const int m = grid.m;
  const int edges = graph.edge_count();
  n_ = edges * m;
  const SpMat D = sbp_first_derivative(m, grid.h);
  const Eigen::VectorXd Hd = sbp_norm(m, grid.h);

  std::vector<SpMat> xs, ss;
  H_.resize(n_);
  for (int e = 0; e < edges; ++e) {
    const bool minus = e < graph.n_minus;
    xs.push_back(minus ? SpMat(-D) : D);
    ss.push_back(D);
    H_.segment(e * m, m) = Hd;
  }
  Dx_ = block_diag(xs);
  Ds_ = block_diag(ss);
  const SpMat D2s = Ds_ * Ds_;

  // constraint rows
  std::vector<Eigen::RowVectorXd> rows;
  auto unit = [&](int i) {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n_);
    r[i] = 1.0;
    return r;
  };
  const int ref = offset(Side::minus, 0);
  for (int e = 1; e < edges; ++e) rows.push_back(unit(e * m) - unit(ref));
  for (int k = 0; k < graph.pairs(); ++k) {
    const int a = offset(Side::plus, k);
    const int b = offset(Side::minus, k);
    rows.push_back(sparse_row(Ds_, a) + sparse_row(Ds_, b) - Z * unit(b));
    if (opt.variant == VertexVariant::AZ)
      rows.push_back(sparse_row(D2s, a) - sparse_row(D2s, b) - 0.5 * Z * Z * unit(b) + Z * sparse_row(Ds_, b));
    else
      rows.push_back(sparse_row(D2s, a) - sparse_row(D2s, b));
  }
  for (int e = 0; e < edges; ++e) {
    const int far = e * m + m - 1;
    rows.push_back(unit(far));
    rows.push_back(sparse_row(Ds_, far));
  }
  const int r = static_cast<int>(rows.size());
  Eigen::MatrixXd Cd(r, n_);
  row_scale_.resize(r);
  for (int i = 0; i < r; ++i) {
    Cd.row(i) = rows[i];
    row_scale_[i] = rows[i].cwiseAbs().maxCoeff();
  }
  C_ = Cd.sparseView();

  // P = I - H^{-1} C^T (C H^{-1} C^T)^{-1} C
  const Eigen::VectorXd Hinv = H_.cwiseInverse();
  const Eigen::MatrixXd HiCt = Hinv.asDiagonal() * Cd.transpose();
  const Eigen::MatrixXd S = Cd * HiCt;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible()) throw std::runtime_error("vertex constraint system is singular at this resolution");
  const Eigen::MatrixXd U = HiCt * lu.inverse();  // n x r
  std::vector<Trip> t;
  for (int i = 0; i < n_; ++i) t.emplace_back(i, i, 1.0);
  // U and C are supported near the vertex and the far ends only
  for (int j = 0; j < n_; ++j) {
    Eigen::VectorXd col = Cd.col(j);
    if (col.isZero(0.0)) continue;
    const Eigen::VectorXd pc = U * col;
    for (int i = 0; i < n_; ++i)
      if (pc[i] != 0.0) t.emplace_back(i, j, -pc[i]);
  }
  P_.resize(n_, n_);
  P_.setFromTriplets(t.begin(), t.end());
  P_.prune(0.0);

  sponge_ = Eigen::VectorXd::Zero(n_);
  const double width = opt.sponge_fraction * grid.L;
  if (width > 0.0) {
    for (int e = 0; e < edges; ++e)
      for (int j = 0; j < m; ++j) {
        const double xi = (j * grid.h - (grid.L - width)) / width;
        if (xi > 0.0) sponge_[e * m + j] = opt.sponge_strength * xi * xi;
      }
  }
}

int GraphDiscretization::offset(Side side, int k) const {
  const int m = grid_.m;
  if (side == Side::minus) {
    if (k < 0 || k >= graph_.n_minus) throw std::out_of_range("minus edge index");
    return k * m;
  }
  if (k < 0 || k >= graph_.n_plus) throw std::out_of_range("plus edge index");
  return (graph_.n_minus + k) * m;
}

Eigen::VectorXd GraphDiscretization::pack(const GraphFunction& f) const {
  if (f.graph.n_minus != graph_.n_minus || f.graph.n_plus != graph_.n_plus || f.grid.m != grid_.m)
    throw std::invalid_argument("graph function does not match the discretization");
  Eigen::VectorXd v(n_);
  for (int k = 0; k < graph_.n_minus; ++k) v.segment(offset(Side::minus, k), grid_.m) = f.minus[k];
  for (int k = 0; k < graph_.n_plus; ++k) v.segment(offset(Side::plus, k), grid_.m) = f.plus[k];
  return v;
}

GraphFunction GraphDiscretization::unpack(const Eigen::VectorXd& v) const {
  if (v.size() != n_) throw std::invalid_argument("vector size does not match the discretization");
  GraphFunction f(graph_, grid_);
  for (int k = 0; k < graph_.n_minus; ++k) f.minus[k] = v.segment(offset(Side::minus, k), grid_.m);
  for (int k = 0; k < graph_.n_plus; ++k) f.plus[k] = v.segment(offset(Side::plus, k), grid_.m);
  return f;
}

SpMat GraphDiscretization::linear_operator(double alpha, double beta, bool with_sponge) const {
  SpMat A = alpha * (Dx_ * (Dx_ * Dx_)) + beta * Dx_;
  if (with_sponge) {
    SpMat S(n_, n_);
    S = SpMat(sponge_.asDiagonal());
    A -= S;
  }
  SpMat out = P_ * A * P_;
  out.prune(0.0);
  return out;
}

SpMat GraphDiscretization::linearized_operator(double alpha, double beta, const Eigen::VectorXd& phi) const {
  if (phi.size() != n_) throw std::invalid_argument("linearization point has the wrong size");
  SpMat A = alpha * (Dx_ * (Dx_ * Dx_)) + beta * Dx_;
  A += 2.0 * Dx_ * SpMat(phi.asDiagonal());
  SpMat out = P_ * A * P_;
  out.prune(0.0);
  return out;
}

Eigen::VectorXd GraphDiscretization::nonlinear_term(const Eigen::VectorXd& u) const {
  return P_ * (Dx_ * u.cwiseProduct(u)).eval();
}

double GraphDiscretization::dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return (H_.array() * a.array() * b.array()).sum();
}

double GraphDiscretization::l2_norm(const Eigen::VectorXd& u) const { return std::sqrt(dot(u, u)); }

double GraphDiscretization::h1_norm(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd du = Dx_ * u;
  return std::sqrt(dot(u, u) + dot(du, du));
}

double GraphDiscretization::constraint_residual(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd r = C_ * u;
  return (r.array().abs() / row_scale_.array()).maxCoeff();
}

}  // namespace graphkdv
