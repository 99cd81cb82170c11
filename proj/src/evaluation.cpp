#include "terp/evaluation.hpp"

namespace terp {

double rand_index(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw DataError("rand_index needs partitions of equal length");
    const std::size_t n = a.size();
    if (n < 2) throw DataError("rand_index needs at least two objects");

    // Pair counting through the contingency table.
    const auto ka = static_cast<std::size_t>(a.clusters());
    const auto kb = static_cast<std::size_t>(b.clusters());
    std::vector<double> table(ka * kb, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        table[static_cast<std::size_t>(a[i] - 1) * kb + static_cast<std::size_t>(b[i] - 1)] += 1.0;
    }
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double both = 0.0;
    for (double c : table) both += pairs(c);
    double same_a = 0.0;
    for (auto s : a.cluster_sizes()) same_a += pairs(static_cast<double>(s));
    double same_b = 0.0;
    for (auto s : b.cluster_sizes()) same_b += pairs(static_cast<double>(s));
    const double total = pairs(static_cast<double>(n));
    const double agree = total + 2.0 * both - same_a - same_b;
    return agree / total;
}

std::vector<double> finite_difference_weights(double x0, std::span<const double> nodes, int order) {
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < order) throw DataError("not enough nodes for the requested derivative order");
    // c[j][k]: weight of node j for derivative k
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) out[static_cast<std::size_t>(j)] = c[j][order];
    return out;
}

Curve derivative(const Curve& curve, int order) {
    if (order != 1 && order != 2) throw ConfigError("derivative order must be 1 or 2");
    const std::size_t m = curve.size();
    const std::size_t boundary = static_cast<std::size_t>(order) + 2;
    if (m < boundary) {
        throw DataError("derivative of order " + std::to_string(order) + " needs at least " +
                        std::to_string(boundary) + " points");
    }
    const auto& t = curve.grid().points();
    std::vector<double> out(m);
    auto apply = [&](std::size_t first, std::size_t count, std::size_t at) {
        const std::span<const double> nodes(t.data() + first, count);
        const auto w = finite_difference_weights(t[at], nodes, order);
        double s = 0.0;
        for (std::size_t j = 0; j < count; ++j) s += w[j] * curve.value(first + j);
        out[at] = s;
    };
    apply(0, boundary, 0);
    for (std::size_t k = 1; k + 1 < m; ++k) apply(k - 1, 3, k);
    apply(m - boundary, boundary, m - 1);
    return Curve(curve.grid(), std::move(out));
}

FunctionalDataset derivative(const FunctionalDataset& data, int order) {
    if (data.regime() != Regime::Regular) {
        throw DataError("derivative preprocessing is only supported for regular data");
    }
    std::vector<Curve> curves;
    curves.reserve(data.size());
    for (const auto& c : data.curves()) curves.push_back(derivative(c, order));
    return FunctionalDataset(std::move(curves), data.regime(), data.ids());
}

}  // namespace terp
