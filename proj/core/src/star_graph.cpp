#include "graphkdv/star_graph.hpp"

#include "graphkdv/stencils.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace graphkdv {

const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

StarGraph::StarGraph(int nm, int np) : n_minus(nm), n_plus(np) {
  if (nm < 1 || np < 1) throw std::invalid_argument("star graph needs at least one edge per side");
  if (nm != np) throw std::invalid_argument("star graph must be balanced (n_minus == n_plus)");
}

GraphGrid::GraphGrid(double L_, int m_) : L(L_), h(0.0), m(m_) {
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw std::invalid_argument("grid length must be positive");
  if (m_ < 8) throw std::invalid_argument("grid needs at least 8 points per edge");
  h = L_ / (m_ - 1);
}

GraphGrid GraphGrid::with_step(double L, double h) {
  if (!(h > 0.0) || !(L > 0.0)) throw std::invalid_argument("grid step and length must be positive");
  const double cells = L / h;
  const double r = std::round(cells);
  if (std::abs(cells - r) > 1e-9 * std::max(1.0, cells))
    throw std::invalid_argument("grid step must divide the truncation length");
  return GraphGrid(L, static_cast<int>(r) + 1);
}

GraphFunction::GraphFunction(const StarGraph& g, const GraphGrid& gr, double fill) : graph(g), grid(gr) {
  minus.assign(g.n_minus, Eigen::VectorXd::Constant(gr.m, fill));
  plus.assign(g.n_plus, Eigen::VectorXd::Constant(gr.m, fill));
}

void GraphFunction::validate() const {
  if (static_cast<int>(minus.size()) != graph.n_minus || static_cast<int>(plus.size()) != graph.n_plus)
    throw std::invalid_argument("graph function: edge count mismatch");
  for (const auto* side : {&minus, &plus})
    for (const auto& e : *side) {
      if (e.size() != grid.m) throw std::invalid_argument("graph function: edge length mismatch");
      if (!e.allFinite()) throw std::invalid_argument("graph function: non-finite entry");
    }
}

double GraphFunction::max_abs() const {
  double v = 0.0;
  for (const auto& e : minus) v = std::max(v, e.cwiseAbs().maxCoeff());
  for (const auto& e : plus) v = std::max(v, e.cwiseAbs().maxCoeff());
  return v;
}

namespace {

void require_same_shape(const GraphFunction& a, const GraphFunction& b) {
  if (a.graph.n_plus != b.graph.n_plus || a.grid.m != b.grid.m || std::abs(a.grid.h - b.grid.h) > 1e-15 * a.grid.L)
    throw std::invalid_argument("graph functions live on different grids");
}

template <class Op>
GraphFunction combine(const GraphFunction& a, const GraphFunction& b, Op op) {
  require_same_shape(a, b);
  GraphFunction r = a;
  for (size_t k = 0; k < r.minus.size(); ++k) r.minus[k] = op(a.minus[k], b.minus[k]);
  for (size_t k = 0; k < r.plus.size(); ++k) r.plus[k] = op(a.plus[k], b.plus[k]);
  return r;
}

double one_sided(const Eigen::VectorXd& v, const std::vector<double>& w, double scale) {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * v[static_cast<Eigen::Index>(i)];
  return s * scale;
}

}  // namespace

GraphFunction operator+(const GraphFunction& a, const GraphFunction& b) {
  return combine(a, b, [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) -> Eigen::VectorXd { return x + y; });
}
GraphFunction operator-(const GraphFunction& a, const GraphFunction& b) {
  return combine(a, b, [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) -> Eigen::VectorXd { return x - y; });
}
GraphFunction operator*(double s, const GraphFunction& a) {
  GraphFunction r = a;
  for (auto& e : r.minus) e *= s;
  for (auto& e : r.plus) e *= s;
  return r;
}

VertexTraces vertex_traces(const GraphFunction& f, int order) {
  if (order != 2 && order != 4) throw std::invalid_argument("stencil order must be 2 or 4");
  if (f.grid.m < order + 2) throw std::invalid_argument("grid too coarse for requested stencil");
  const auto w1 = one_sided_weights(1, order);
  const auto w2 = one_sided_weights(2, order);
  const double h = f.grid.h;
  const int n = f.graph.pairs();
  VertexTraces t;
  t.stencil_order = order;
  for (auto* v : {&t.u0_minus, &t.u0_plus, &t.u1_minus, &t.u1_plus, &t.u2_minus, &t.u2_plus}) v->resize(n);
  for (int k = 0; k < n; ++k) {
    const auto& um = f.minus[k];
    const auto& up = f.plus[k];
    t.u0_minus[k] = um[0];
    t.u0_plus[k] = up[0];
    // minus edges are sampled along s = -x, so odd derivatives flip sign
    t.u1_minus[k] = -one_sided(um, w1, 1.0 / h);
    t.u1_plus[k] = one_sided(up, w1, 1.0 / h);
    t.u2_minus[k] = one_sided(um, w2, 1.0 / (h * h));
    t.u2_plus[k] = one_sided(up, w2, 1.0 / (h * h));
  }
  return t;
}

const char* to_string(CompatTier t) {
  switch (t) {
    case CompatTier::none: return "none";
    case CompatTier::s_1_to_3half: return "s in [1,3/2]";
    case CompatTier::s_3half_to_5half: return "s in (3/2,5/2]";
    case CompatTier::s_above_5half: return "s > 5/2";
  }
  return "?";
}

DomainCheck vertex_condition_residuals(const GraphFunction& f, double Z, int order) {
  const VertexTraces t = vertex_traces(f, order);
  DomainCheck d;
  const double ref = t.u0_plus[0];
  for (int k = 0; k < f.graph.pairs(); ++k) {
    d.continuity = std::max({d.continuity, std::abs(t.u0_plus[k] - t.u0_minus[k]), std::abs(t.u0_plus[k] - ref),
                             std::abs(t.u0_minus[k] - ref)});
    d.first_jump = std::max(d.first_jump, std::abs(t.u1_plus[k] - t.u1_minus[k] - Z * t.u0_minus[k]));
    d.second_jump = std::max(
        d.second_jump,
        std::abs(t.u2_plus[k] - t.u2_minus[k] - 0.5 * Z * Z * t.u0_minus[k] - Z * t.u1_minus[k]));
  }
  return d;
}

CompatTier compat_class(const GraphFunction& f, double Z, double tol, int order) {
  if (Z == 0.0) throw std::invalid_argument("compat_class: Z must be nonzero");
  const DomainCheck d = vertex_condition_residuals(f, Z, order);
  if (d.continuity > tol) return CompatTier::none;
  if (d.first_jump > tol) return CompatTier::s_1_to_3half;
  if (d.second_jump > tol) return CompatTier::s_3half_to_5half;
  return CompatTier::s_above_5half;
}

DomainCheck check_domain_AZ(const GraphFunction& f, double Z, double tol, int order) {
  if (Z == 0.0) throw std::invalid_argument("check_domain_AZ: Z must be nonzero");
  DomainCheck d = vertex_condition_residuals(f, Z, order);
  d.ok = d.continuity <= tol && d.first_jump <= tol && d.second_jump <= tol;
  return d;
}

namespace {

Eigen::VectorXd edge_derivative(const Eigen::VectorXd& v, double h) {
  const Eigen::Index m = v.size();
  Eigen::VectorXd d(m);
  for (Eigen::Index j = 1; j + 1 < m; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[m - 1] = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h);
  return d;
}

double trapezoid(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double h) {
  double s = a.dot(b) - 0.5 * (a[0] * b[0] + a[a.size() - 1] * b[b.size() - 1]);
  return s * h;
}

}  // namespace

GraphFunction derivative(const GraphFunction& f) {
  if (f.grid.m < 3) throw std::invalid_argument("derivative: grid too coarse");
  GraphFunction d = f;
  for (auto& e : d.plus) e = edge_derivative(e, f.grid.h);
  for (auto& e : d.minus) e = -edge_derivative(e, f.grid.h);
  return d;
}

double inner_product(const GraphFunction& u, const GraphFunction& v) {
  require_same_shape(u, v);
  double s = 0.0;
  for (size_t k = 0; k < u.minus.size(); ++k) s += trapezoid(u.minus[k], v.minus[k], u.grid.h);
  for (size_t k = 0; k < u.plus.size(); ++k) s += trapezoid(u.plus[k], v.plus[k], u.grid.h);
  return s;
}

double sobolev_norm(const GraphFunction& f, int s) {
  if (s < 0 || s > 3) throw std::invalid_argument("sobolev_norm: s must be 0, 1, 2 or 3");
  if (f.grid.m < 3 * s + 3) throw std::invalid_argument("sobolev_norm: grid too coarse");
  double total = inner_product(f, f);
  GraphFunction d = f;
  for (int j = 1; j <= s; ++j) {
    d = derivative(d);
    total += inner_product(d, d);
  }
  return std::sqrt(total);
}

void write_csv(std::ostream& os, const GraphFunction& f) {
  os << "edge_side,edge_index,node_index,x,value\n";
  os << std::setprecision(17);
  for (Side side : {Side::minus, Side::plus}) {
    const int count = side == Side::plus ? f.graph.n_plus : f.graph.n_minus;
    for (int k = 0; k < count; ++k) {
      const auto& e = f.edge(side, k);
      for (int j = 0; j < f.grid.m; ++j)
        os << to_string(side) << ',' << k << ',' << j << ',' << f.grid.x(side, j) << ',' << e[j] << '\n';
    }
  }
}

GraphFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("graph csv: empty input");
  if (line != "edge_side,edge_index,node_index,x,value") throw std::invalid_argument("graph csv: bad header");
  std::map<std::pair<int, int>, std::map<int, std::pair<double, double>>> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string side, a, b, c, d;
    if (!std::getline(ss, side, ',') || !std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, c, ',') || !std::getline(ss, d))
      throw std::invalid_argument("graph csv: malformed line " + std::to_string(lineno));
    int s;
    if (side == "minus") s = 0;
    else if (side == "plus") s = 1;
    else throw std::invalid_argument("graph csv: bad edge_side on line " + std::to_string(lineno));
    rows[{s, std::stoi(a)}][std::stoi(b)] = {std::stod(c), std::stod(d)};
  }
  int nm = 0, np = 0, m = -1;
  double L = 0.0;
  for (const auto& [key, nodes] : rows) {
    (key.first == 0 ? nm : np) = std::max(key.first == 0 ? nm : np, key.second + 1);
    if (m < 0) m = static_cast<int>(nodes.size());
    if (static_cast<int>(nodes.size()) != m) throw std::invalid_argument("graph csv: ragged edges");
    L = std::max(L, std::abs(nodes.rbegin()->second.first));
  }
  if (static_cast<int>(rows.size()) != nm + np) throw std::invalid_argument("graph csv: missing edges");
  GraphFunction f(StarGraph(nm, np), GraphGrid(L, m));
  for (const auto& [key, nodes] : rows) {
    auto& e = f.edge(key.first == 0 ? Side::minus : Side::plus, key.second);
    for (const auto& [j, xv] : nodes) {
      if (j < 0 || j >= m) throw std::invalid_argument("graph csv: node index out of range");
      e[j] = xv.second;
    }
  }
  f.validate();
  return f;
}

}  // namespace graphkdv
