#pragma once

#include "terp/core_types.hpp"

#include <span>
#include <vector>

namespace terp {

/// Fraction of object pairs on which two partitions agree.
double rand_index(const Partition& a, const Partition& b);

/// Finite-difference weights for the `order`-th derivative at `x0` from the
/// given nodes (Fornberg's recursion).
std::vector<double> finite_difference_weights(double x0, std::span<const double> nodes, int order);

/// Derivative of order 1 or 2 on the curve's own grid: three-point central
/// stencils inside, one-sided (order+2)-point stencils at the ends.
/// Needs at least order+2 points.
Curve derivative(const Curve& curve, int order);

/// Applies derivative() to every curve of a Regular dataset.
FunctionalDataset derivative(const FunctionalDataset& data, int order);

}  // namespace terp
