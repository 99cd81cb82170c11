#pragma once

#include "terp/core_types.hpp"
#include "terp/gp_sampler.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace terp {

/// Raised when a stage-1 cluster has fewer than two members.
struct ClusterTooSmall : DegenerateError {
    using DegenerateError::DegenerateError;
};

inline constexpr double kDefaultVarianceCutoff = 0.99;

/// Cluster-wise mean functions on a common output grid.
struct ClusterMeans {
    Grid grid;
    std::vector<Curve> means;  // one per cluster, cluster order 1..K
};

/// Smoothing knobs for sparse/irregular covariance estimation. Unset
/// bandwidths select the rule of thumb 1.06 * sd(t) * m^(-1/5).
struct SmootherConfig {
    std::size_t grid_size = 101;
    std::optional<double> mean_bandwidth;
    std::optional<double> covariance_bandwidth;

    void validate() const;
};

struct PooledEigenpairs {
    ClusterMeans means;
    EigenSystem system;
    Eigen::MatrixXd covariance;            // pooled surface on system.grid()
    std::vector<double> raw_eigenvalues;   // every eigenvalue before clipping, non-increasing
};

/// Rule-of-thumb bandwidth 1.06 * sd(times) * count^(-1/5).
double rule_of_thumb_bandwidth(std::span<const double> times, double count);

/// Eigenpairs of a covariance surface on `grid`, orthonormal under
/// trapezoid quadrature. Eigenvalues are clipped at zero and the smallest
/// prefix explaining `variance_cutoff` of the total is kept.
EigenSystem eigen_system_from_covariance(const Grid& grid, const Eigen::MatrixXd& covariance,
                                         double variance_cutoff, std::vector<double>* raw_eigenvalues = nullptr);

/// Cluster-centred empirical covariance (1/n) sum_i X~_i X~_i^T on the
/// common grid of a Regular dataset. Throws ClusterTooSmall for singletons.
PooledEigenpairs pooled_eigenpairs_regular(const FunctionalDataset& data, const Partition& partition,
                                           double variance_cutoff = kDefaultVarianceCutoff);

/// Smoothing path for Irregular/Fragmented data: Nadaraya-Watson means per
/// cluster, centring at the observed times, and a Nadaraya-Watson surface
/// built from off-diagonal raw cross-products of the centred curves.
PooledEigenpairs pooled_eigenpairs_irregular(const FunctionalDataset& data, const Partition& partition,
                                             const SmootherConfig& cfg,
                                             double variance_cutoff = kDefaultVarianceCutoff);

}  // namespace terp
