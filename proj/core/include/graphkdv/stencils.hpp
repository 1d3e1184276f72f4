#pragma once

#include <vector>

namespace graphkdv {

// Finite-difference weights (Fornberg) for derivative `order` at z from the
// given nodes; result[k] multiplies f(nodes[k]).
std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int order);

// One-sided weights at node 0 using nodes 0..count-1 with unit spacing.
// Scale by h^-order before use.
std::vector<double> one_sided_weights(int derivative, int accuracy);

}  // namespace graphkdv
