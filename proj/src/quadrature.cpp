#include "terp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace terp {

QuadratureRule QuadratureRule::for_regime(Regime regime) {
    QuadratureRule rule;
    rule.skip_gaps = regime == Regime::Fragmented;
    return rule;
}

std::vector<std::size_t> gap_intervals(const Grid& grid, const QuadratureRule& rule) {
    std::vector<std::size_t> gaps;
    if (!rule.skip_gaps || grid.size() < 3) {
        return gaps;
    }
    std::vector<double> spacing(grid.size() - 1);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        spacing[k] = grid[k + 1] - grid[k];
    }
    std::vector<double> sorted = spacing;
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double limit = rule.gap_factor * *mid;
    for (std::size_t k = 0; k < spacing.size(); ++k) {
        if (spacing[k] > limit) {
            gaps.push_back(k);
        }
    }
    return gaps;
}

std::vector<double> quadrature_weights(const Grid& grid, const QuadratureRule& rule) {
    const auto gaps = gap_intervals(grid, rule);
    std::vector<double> w(grid.size(), 0.0);
    auto gap = gaps.begin();
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        if (gap != gaps.end() && *gap == k) {
            ++gap;
            continue;
        }
        const double half = 0.5 * (grid[k + 1] - grid[k]);
        w[k] += half;
        w[k + 1] += half;
    }
    return w;
}

namespace {

// Neumaier summation; with the exact interval residuals below, a constant integrand sums to the span exactly
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

double inner_product(const Curve& f, const Curve& g, const QuadratureRule& rule) {
    if (!(f.grid() == g.grid())) {
        throw DataError("inner_product needs curves on the same grid; interpolate one onto the other first");
    }
    const Grid& grid = f.grid();
    const auto gaps = gap_intervals(grid, rule);
    auto gap = gaps.begin();
    CompensatedSum acc;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        if (gap != gaps.end() && *gap == k) {
            ++gap;
            continue;
        }
        // f*g evaluated symmetrically so the result does not depend on argument order
        const double mean = 0.5 * (f.value(k) * g.value(k) + f.value(k + 1) * g.value(k + 1));
        // width = dt + residual exactly (two-difference)
        const double dt = grid[k + 1] - grid[k];
        const double back = grid[k + 1] - dt;
        const double residual = (grid[k + 1] - (dt + back)) + (back - grid[k]);
        acc.add(dt * mean);
        acc.add(residual * mean);
    }
    return acc.value();
}

std::vector<InterpolationStencil> interpolation_stencils(const Grid& source, const Grid& target) {
    std::vector<InterpolationStencil> out;
    out.reserve(target.size());
    const auto& s = source.points();
    for (double t : target.points()) {
        if (t < s.front() || t > s.back()) {
            throw DataError("interpolation target " + std::to_string(t) + " outside direction span [" +
                            std::to_string(s.front()) + ", " + std::to_string(s.back()) + "]");
        }
        auto it = std::upper_bound(s.begin(), s.end(), t);
        std::size_t upper = static_cast<std::size_t>(it - s.begin());
        if (upper >= s.size()) {
            upper = s.size() - 1;
        }
        const std::size_t lower = upper - 1;
        const double weight = (t - s[lower]) / (s[upper] - s[lower]);
        out.push_back({lower, weight});
    }
    return out;
}

Curve interpolate_to(const Curve& direction, const Grid& target) {
    const auto stencils = interpolation_stencils(direction.grid(), target);
    std::vector<double> values(target.size());
    for (std::size_t i = 0; i < stencils.size(); ++i) {
        const auto& st = stencils[i];
        const double lo = direction.value(st.lower);
        const double hi = direction.value(st.lower + 1);
        values[i] = st.upper_weight == 0.0 ? lo : (1.0 - st.upper_weight) * lo + st.upper_weight * hi;
    }
    return Curve(target, std::move(values));
}

}  // namespace terp
