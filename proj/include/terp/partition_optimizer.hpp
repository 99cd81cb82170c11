#pragma once

#include "terp/core_types.hpp"
#include "terp/seed.hpp"

#include <functional>
#include <vector>

namespace terp {

struct OptimizerConfig {
    int restarts = 10;
    int max_sweeps = 100;
    SeedSpec seed;

    void validate() const;
};

/// Within-cluster cost sum_r (1/(2|S_r|)) sum_{i,j in S_r} D_ij^2 divided by
/// the total dispersion (1/(2n)) sum_{i,j} D_ij^2. Throws DegenerateError
/// when the total dispersion is zero.
double normalized_cost(const DissimilarityMatrix& dissimilarity, const Partition& partition);

struct OptimizeResult {
    Partition partition;
    double cost = 0.0;
    int best_restart = 0;
};

/// Called after every accepted relocation with the updated normalized cost.
using MoveObserver = std::function<void(double cost)>;

/// Single-point relocation descent from `labels` (0-based cluster ids,
/// all K clusters non-empty). A point moves to the cluster giving the
/// largest strict decrease of the cost; moves that would empty a cluster
/// are never made. Stops after a sweep without moves or `max_sweeps`.
std::vector<int> relocate(const DissimilarityMatrix& dissimilarity, std::vector<int> labels, int clusters,
                          int max_sweeps, const MoveObserver& observer = {});

/// Best partition over `cfg.restarts` random starts. Requires 2 <= K <= n-1.
OptimizeResult optimize(const DissimilarityMatrix& dissimilarity, int clusters, const OptimizerConfig& cfg);

}  // namespace terp
