#include "terp/covariance.hpp"

#include "terp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace terp {

void SmootherConfig::validate() const {
    if (grid_size < 2) throw ConfigError("smoothing grid needs at least two points");
    if (mean_bandwidth && !(*mean_bandwidth > 0.0)) throw ConfigError("mean bandwidth must be positive");
    if (covariance_bandwidth && !(*covariance_bandwidth > 0.0)) {
        throw ConfigError("covariance bandwidth must be positive");
    }
}

double rule_of_thumb_bandwidth(std::span<const double> times, double count) {
    const double n = static_cast<double>(times.size());
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
    double ss = 0.0;
    for (double t : times) ss += (t - mean) * (t - mean);
    const double sd = std::sqrt(ss / std::max(n - 1.0, 1.0));
    return 1.06 * sd * std::pow(count, -0.2);
}

EigenSystem eigen_system_from_covariance(const Grid& grid, const Eigen::MatrixXd& covariance,
                                         double variance_cutoff, std::vector<double>* raw_eigenvalues) {
    if (!(variance_cutoff > 0.0 && variance_cutoff <= 1.0)) {
        throw ConfigError("variance cutoff must lie in (0, 1]");
    }
    const auto w = quadrature_weights(grid);
    const Eigen::Index g = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd root(g);
    for (Eigen::Index i = 0; i < g; ++i) root(i) = std::sqrt(w[static_cast<std::size_t>(i)]);

    Eigen::MatrixXd weighted = root.asDiagonal() * covariance * root.asDiagonal();
    weighted = 0.5 * (weighted + weighted.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted);
    if (solver.info() != Eigen::Success) {
        throw DegenerateError("eigendecomposition of the pooled covariance failed");
    }
    // Eigen returns ascending order
    const Eigen::VectorXd values = solver.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    if (raw_eigenvalues) {
        raw_eigenvalues->assign(values.data(), values.data() + values.size());
    }

    std::vector<double> clipped(static_cast<std::size_t>(g));
    double total = 0.0;
    for (Eigen::Index j = 0; j < g; ++j) {
        clipped[static_cast<std::size_t>(j)] = std::max(values(j), 0.0);
        total += clipped[static_cast<std::size_t>(j)];
    }
    std::size_t keep = 1;
    if (total > 0.0) {
        double running = 0.0;
        for (keep = 0; keep < clipped.size();) {
            running += clipped[keep++];
            if (running >= variance_cutoff * total) break;
        }
    } else {
        clipped[0] = 0.0;
    }
    clipped.resize(keep);

    Eigen::MatrixXd functions(g, static_cast<Eigen::Index>(keep));
    for (Eigen::Index j = 0; j < functions.cols(); ++j) {
        Eigen::VectorXd phi = vectors.col(j).cwiseQuotient(root);
        // sign convention: positive integral, or positive first non-zero value
        const double mass = phi.dot(Eigen::Map<const Eigen::VectorXd>(w.data(), g));
        if (mass < 0.0) phi = -phi;
        functions.col(j) = phi;
    }
    return EigenSystem(grid, std::move(clipped), std::move(functions));
}

namespace {

void require_min_cluster_size(const Partition& partition) {
    for (auto s : partition.cluster_sizes()) {
        if (s < 2) throw ClusterTooSmall("cluster too small for covariance");
    }
}

constexpr double kKernelSupport = 4.0;

double gaussian_kernel(double u) {
    return std::abs(u) > kKernelSupport ? 0.0 : std::exp(-0.5 * u * u);
}

}  // namespace

PooledEigenpairs pooled_eigenpairs_regular(const FunctionalDataset& data, const Partition& partition,
                                           double variance_cutoff) {
    if (data.regime() != Regime::Regular) {
        throw DataError("the empirical covariance path needs a regular dataset");
    }
    if (partition.size() != data.size()) {
        throw DataError("partition size does not match dataset size");
    }
    require_min_cluster_size(partition);

    const Grid& grid = data.common_grid();
    const auto g = static_cast<Eigen::Index>(grid.size());
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto k = partition.clusters();
    const auto sizes = partition.cluster_sizes();

    Eigen::MatrixXd values(n, g);
    for (Eigen::Index i = 0; i < n; ++i) {
        values.row(i) = Eigen::Map<const Eigen::RowVectorXd>(data[static_cast<std::size_t>(i)].values().data(), g);
    }
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, g);
    for (Eigen::Index i = 0; i < n; ++i) {
        means.row(partition[static_cast<std::size_t>(i)] - 1) += values.row(i);
    }
    for (int r = 0; r < k; ++r) {
        means.row(r) /= static_cast<double>(sizes[static_cast<std::size_t>(r)]);
    }
    Eigen::MatrixXd residuals(n, g);
    for (Eigen::Index i = 0; i < n; ++i) {
        residuals.row(i) = values.row(i) - means.row(partition[static_cast<std::size_t>(i)] - 1);
    }
    Eigen::MatrixXd covariance = residuals.transpose() * residuals / static_cast<double>(n);

    ClusterMeans cm{grid, {}};
    for (int r = 0; r < k; ++r) {
        cm.means.emplace_back(grid, std::vector<double>(means.row(r).begin(), means.row(r).end()));
    }
    std::vector<double> raw;
    EigenSystem system = eigen_system_from_covariance(grid, covariance, variance_cutoff, &raw);
    return {std::move(cm), std::move(system), std::move(covariance), std::move(raw)};
}

PooledEigenpairs pooled_eigenpairs_irregular(const FunctionalDataset& data, const Partition& partition,
                                             const SmootherConfig& cfg, double variance_cutoff) {
    cfg.validate();
    if (partition.size() != data.size()) {
        throw DataError("partition size does not match dataset size");
    }
    require_min_cluster_size(partition);

    const Grid out = Grid::equispaced(cfg.grid_size);
    const auto g = static_cast<Eigen::Index>(out.size());
    const double step = 1.0 / static_cast<double>(out.size() - 1);

    std::vector<double> pooled;
    for (const auto& c : data.curves()) {
        pooled.insert(pooled.end(), c.grid().points().begin(), c.grid().points().end());
    }
    std::sort(pooled.begin(), pooled.end());
    for (double s : out.points()) {
        auto it = std::lower_bound(pooled.begin(), pooled.end(), s);
        double nearest = std::numeric_limits<double>::infinity();
        if (it != pooled.end()) nearest = *it - s;
        if (it != pooled.begin()) nearest = std::min(nearest, s - *std::prev(it));
        if (nearest > step + 1e-12) {
            throw DegenerateError("domain not covered: no observation within one grid step of t=" + std::to_string(s));
        }
    }

    // Cluster means by Nadaraya-Watson smoothing of pooled (t, x) points.
    const auto members = partition.members();
    ClusterMeans cm{out, {}};
    for (const auto& cluster : members) {
        std::vector<double> times;
        std::vector<double> ys;
        for (auto i : cluster) {
            const auto& c = data[i];
            times.insert(times.end(), c.grid().points().begin(), c.grid().points().end());
            ys.insert(ys.end(), c.values().begin(), c.values().end());
        }
        const double h = cfg.mean_bandwidth ? *cfg.mean_bandwidth
                                            : rule_of_thumb_bandwidth(times, static_cast<double>(times.size()));
        std::vector<double> mean(out.size());
        for (std::size_t s = 0; s < out.size(); ++s) {
            double num = 0.0;
            double den = 0.0;
            for (std::size_t p = 0; p < times.size(); ++p) {
                const double kw = gaussian_kernel((out[s] - times[p]) / h);
                num += kw * ys[p];
                den += kw;
            }
            if (!(den > 0.0)) {
                throw DegenerateError("bandwidth too small: empty smoothing window for the mean at t=" +
                                      std::to_string(out[s]));
            }
            mean[s] = num / den;
        }
        cm.means.emplace_back(out, std::move(mean));
    }

    // Centre each curve at its own observation times.
    std::vector<Eigen::VectorXd> residuals;
    residuals.reserve(data.size());
    double pair_count = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& c = data[i];
        const Curve mu = interpolate_to(cm.means[static_cast<std::size_t>(partition[i] - 1)], c.grid());
        Eigen::VectorXd r(static_cast<Eigen::Index>(c.size()));
        for (std::size_t j = 0; j < c.size(); ++j) r(static_cast<Eigen::Index>(j)) = c.value(j) - mu.value(j);
        residuals.push_back(std::move(r));
        const double m = static_cast<double>(c.size());
        pair_count += m * (m - 1.0);
    }
    const double h = cfg.covariance_bandwidth ? *cfg.covariance_bandwidth : rule_of_thumb_bandwidth(pooled, pair_count);

    // Off-diagonal raw products x_j x_l (j != l) smoothed with a product kernel:
    // sum_{j != l} a_j(s) a_l(t) x_j x_l = (A x)(A x)^T - A diag(x^2) A^T.
    Eigen::MatrixXd numerator = Eigen::MatrixXd::Zero(g, g);
    Eigen::MatrixXd denominator = Eigen::MatrixXd::Zero(g, g);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& c = data[i];
        const auto m = static_cast<Eigen::Index>(c.size());
        Eigen::MatrixXd kernel(g, m);
        for (Eigen::Index s = 0; s < g; ++s) {
            for (Eigen::Index j = 0; j < m; ++j) {
                kernel(s, j) = gaussian_kernel((out[static_cast<std::size_t>(s)] - c.time(static_cast<std::size_t>(j))) / h);
            }
        }
        const Eigen::VectorXd& x = residuals[i];
        const Eigen::VectorXd ax = kernel * x;
        const Eigen::VectorXd a1 = kernel.rowwise().sum();
        const Eigen::MatrixXd scaled = kernel * x.asDiagonal();
        numerator.noalias() += ax * ax.transpose();
        numerator.noalias() -= scaled * scaled.transpose();
        denominator.noalias() += a1 * a1.transpose();
        denominator.noalias() -= kernel * kernel.transpose();
    }
    const double floor = 1e-12 * denominator.maxCoeff();
    Eigen::MatrixXd covariance(g, g);
    for (Eigen::Index s = 0; s < g; ++s) {
        for (Eigen::Index t = 0; t < g; ++t) {
            if (!(denominator(s, t) > floor)) {
                throw DegenerateError("bandwidth too small: empty smoothing window for the covariance at (" +
                                      std::to_string(out[static_cast<std::size_t>(s)]) + ", " +
                                      std::to_string(out[static_cast<std::size_t>(t)]) + ")");
            }
            covariance(s, t) = numerator(s, t) / denominator(s, t);
        }
    }
    covariance = 0.5 * (covariance + covariance.transpose()).eval();

    std::vector<double> raw;
    EigenSystem system = eigen_system_from_covariance(out, covariance, variance_cutoff, &raw);
    return {std::move(cm), std::move(system), std::move(covariance), std::move(raw)};
}

}  // namespace terp
