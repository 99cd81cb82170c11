#include "terp/partition_optimizer.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace terp {

void OptimizerConfig::validate() const {
    if (restarts < 1) throw ConfigError("optimizer needs at least one restart");
    if (max_sweeps < 1) throw ConfigError("optimizer needs at least one sweep");
}

double normalized_cost(const DissimilarityMatrix& dissimilarity, const Partition& partition) {
    const Eigen::Index n = dissimilarity.size();
    if (static_cast<Eigen::Index>(partition.size()) != n) {
        throw DataError("partition size does not match the dissimilarity matrix");
    }
    const auto& d = dissimilarity.entries();
    std::vector<double> within(static_cast<std::size_t>(partition.clusters()), 0.0);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double sq = d(i, j) * d(i, j);
            total += sq;
            if (partition[static_cast<std::size_t>(i)] == partition[static_cast<std::size_t>(j)]) {
                within[static_cast<std::size_t>(partition[static_cast<std::size_t>(i)] - 1)] += sq;
            }
        }
    }
    total /= 2.0 * static_cast<double>(n);
    if (!(total > 0.0)) {
        throw DegenerateError("degenerate dissimilarity: total dispersion is zero");
    }
    const auto sizes = partition.cluster_sizes();
    double phi = 0.0;
    for (std::size_t r = 0; r < within.size(); ++r) {
        phi += within[r] / (2.0 * static_cast<double>(sizes[r]));
    }
    return phi / total;
}

std::vector<int> relocate(const DissimilarityMatrix& dissimilarity, std::vector<int> labels, int clusters,
                          int max_sweeps, const MoveObserver& observer) {
    const Eigen::Index n = dissimilarity.size();
    const auto k = static_cast<Eigen::Index>(clusters);
    const Eigen::MatrixXd squared = dissimilarity.entries().cwiseAbs2();

    // sums(i, r): sum of squared dissimilarities from i to members of r
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, k);
    std::vector<double> within(static_cast<std::size_t>(k), 0.0);
    std::vector<double> count(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        ++count[static_cast<std::size_t>(labels[i])];
        for (Eigen::Index j = 0; j < n; ++j) {
            sums(i, labels[j]) += squared(i, j);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        within[static_cast<std::size_t>(labels[i])] += sums(i, labels[i]);
    }
    const double total = squared.sum() / (2.0 * static_cast<double>(n));
    if (!(total > 0.0)) {
        throw DegenerateError("degenerate dissimilarity: total dispersion is zero");
    }
    const double tolerance = 1e-12 * total;

    auto cost = [&] {
        double phi = 0.0;
        for (std::size_t r = 0; r < within.size(); ++r) {
            phi += within[r] / (2.0 * count[r]);
        }
        return phi / total;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto from = static_cast<std::size_t>(labels[i]);
            if (count[from] <= 1.0) continue;
            const double removal = (within[from] - 2.0 * sums(i, labels[i])) / (2.0 * (count[from] - 1.0)) -
                                   within[from] / (2.0 * count[from]);
            double best_delta = -tolerance;
            Eigen::Index best = -1;
            for (Eigen::Index r = 0; r < k; ++r) {
                const auto to = static_cast<std::size_t>(r);
                if (to == from) continue;
                const double addition =
                    (within[to] + 2.0 * sums(i, r)) / (2.0 * (count[to] + 1.0)) - within[to] / (2.0 * count[to]);
                const double delta = removal + addition;
                if (delta < best_delta) {
                    best_delta = delta;
                    best = r;
                }
            }
            if (best < 0) continue;

            const auto to = static_cast<std::size_t>(best);
            within[from] -= 2.0 * sums(i, labels[i]);
            within[to] += 2.0 * sums(i, best);
            count[from] -= 1.0;
            count[to] += 1.0;
            const Eigen::Index old_label = labels[i];
            for (Eigen::Index j = 0; j < n; ++j) {
                sums(j, old_label) -= squared(j, i);
                sums(j, best) += squared(j, i);
            }
            labels[i] = static_cast<int>(best);
            moved = true;
            if (observer) observer(cost());
        }
        if (!moved) break;
    }
    return labels;
}

OptimizeResult optimize(const DissimilarityMatrix& dissimilarity, int clusters, const OptimizerConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<int>(dissimilarity.size());
    if (clusters < 2 || clusters > n - 1) {
        throw ConfigError("K must satisfy 2 <= K <= n-1 (K=" + std::to_string(clusters) +
                          ", n=" + std::to_string(n) + ")");
    }

    OptimizeResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        auto engine = cfg.seed.child(static_cast<std::uint64_t>(restart)).engine();
        std::uniform_int_distribution<int> pick(0, clusters - 1);
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (;;) {
            std::vector<int> seen(static_cast<std::size_t>(clusters), 0);
            for (auto& l : labels) {
                l = pick(engine);
                seen[static_cast<std::size_t>(l)] = 1;
            }
            if (std::find(seen.begin(), seen.end(), 0) == seen.end()) break;
        }
        labels = relocate(dissimilarity, std::move(labels), clusters, cfg.max_sweeps);
        Partition candidate = partition_from_labels(std::span<const int>(labels));
        const double c = normalized_cost(dissimilarity, candidate);
        if (c < best.cost) {
            best.partition = std::move(candidate);
            best.cost = c;
            best.best_restart = restart;
        }
    }
    return best;
}

}  // namespace terp
