#pragma once

#include "terp/core_types.hpp"
#include "terp/covariance.hpp"
#include "terp/gp_sampler.hpp"
#include "terp/partition_optimizer.hpp"
#include "terp/seed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace terp {

struct EnsembleConfig {
    std::vector<ProjectionFamily> families = default_families();
    std::vector<std::size_t> m_set = {10, 50, 100, 500, 1000};
    int clusters = 2;
    OptimizerConfig optimizer;  // restarts and sweeps; its seed is derived per stage
    SmootherConfig smoother;
    double variance_cutoff = kDefaultVarianceCutoff;
    SeedSpec seed;
    /// Worker threads for the (family, M) sweep; 0 picks the hardware count.
    std::size_t threads = 0;

    void validate() const;
};

/// Builds the n x M projection matrix <X_i, Z_q> by trapezoid quadrature on
/// each curve's own grid. Column q of `directions` holds Z_q on
/// `direction_grid`; curve points that are not direction grid points are
/// linearly interpolated.
ProjectedMatrix project(const FunctionalDataset& data, const Grid& direction_grid, const Eigen::MatrixXd& directions);

/// Sorted union of every curve's observation times.
Grid union_grid(const FunctionalDataset& data);

struct StageOneResult {
    Partition partition;
    double cost = 0.0;
    ProjectedMatrix projected;
};

StageOneResult stage_one(const FunctionalDataset& data, const ProjectionFamily& family, std::size_t m, int clusters,
                         const SeedSpec& seed, const OptimizerConfig& optimizer = {});

struct StageTwoResult {
    std::optional<Partition> partition;
    std::optional<double> cost;
    std::string skip_reason;  // set when the stage was skipped

    bool ran() const { return partition.has_value(); }
};

/// Data-driven projections from the pooled covariance of the stage-1
/// clusters. Degenerate inputs (singleton clusters, zero covariance) give a
/// skipped result instead of an error.
StageTwoResult stage_two(const FunctionalDataset& data, const Partition& stage1, std::size_t m, int clusters,
                         const EnsembleConfig& cfg, const SeedSpec& seed);

struct CombinationRecord {
    std::size_t family_index = 0;
    std::size_t m_index = 0;
    std::string family;
    std::size_t m = 0;
    std::optional<Partition> stage1;
    std::optional<double> stage1_cost;
    std::string stage1_failure;
    std::optional<Partition> stage2;
    std::optional<double> stage2_cost;
    std::string stage2_skip;

    /// min of the available stage costs; empty if stage 1 failed.
    std::optional<double> v() const;
};

struct Selection {
    std::size_t family_index = 0;
    std::size_t m_index = 0;
    int stage = 1;
};

/// Argmin of v over the records; ties go to the lower family index, then
/// the lower M index, then stage 1. Throws DegenerateError if no record has
/// a cost.
Selection select_best(const std::vector<CombinationRecord>& records);

struct EnsembleResult {
    std::vector<CombinationRecord> records;  // family-major, M-minor
    Selection selected;
    std::size_t selected_m = 0;
    std::string selected_family;
    Partition partition;
    double cost = 0.0;
    bool fallback = false;  // some combination skipped stage 2 or failed

    const CombinationRecord& record(std::size_t family_index, std::size_t m_index) const;
};

EnsembleResult run_ensemble(const FunctionalDataset& data, const EnsembleConfig& cfg);

}  // namespace terp
