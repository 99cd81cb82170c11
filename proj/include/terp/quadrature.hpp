#pragma once

#include "terp/core_types.hpp"

#include <vector>

namespace terp {

/// Trapezoid quadrature on an arbitrary grid.
///
/// With `skip_gaps` set, any interval wider than `gap_factor` times the
/// curve's median spacing is treated as unobserved and contributes nothing,
/// so fragmented curves are integrated over their observed segments only.
struct QuadratureRule {
    enum class Kind { Trapezoid };
    Kind kind = Kind::Trapezoid;
    bool skip_gaps = false;
    double gap_factor = 1.5;

    static QuadratureRule for_regime(Regime regime);
};

/// Weights w with sum_k w_k f(t_k) approximating the integral of f.
std::vector<double> quadrature_weights(const Grid& grid, const QuadratureRule& rule = {});

/// Indices k such that [t_k, t_{k+1}] is an unobserved gap under `rule`.
std::vector<std::size_t> gap_intervals(const Grid& grid, const QuadratureRule& rule);

/// Approximates the L2 inner product. Both curves must share the same grid;
/// use interpolate_to first otherwise.
double inner_product(const Curve& f, const Curve& g, const QuadratureRule& rule = {});

/// Piecewise-linear evaluation of `direction` at every target point.
/// Throws DataError for targets outside the direction's span.
Curve interpolate_to(const Curve& direction, const Grid& target);

/// Bracketing interval and linear weight for one target point.
struct InterpolationStencil {
    std::size_t lower = 0;
    double upper_weight = 0.0;  // weight on lower+1; lower gets 1 - upper_weight
};

std::vector<InterpolationStencil> interpolation_stencils(const Grid& source, const Grid& target);

}  // namespace terp
