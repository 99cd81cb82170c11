#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace terp {

// Error families. The CLI maps them onto exit codes 2, 3 and 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordered observation times in [0, 1].
class Grid {
public:
    Grid() = default;
    /// Throws DataError unless points are strictly increasing, inside [0,1]
    /// and at least two long.
    explicit Grid(std::vector<double> points);

    /// `count` equi-spaced points covering [0, 1] including both ends.
    static Grid equispaced(std::size_t count);

    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }
    const std::vector<double>& points() const { return points_; }
    std::span<const double> span() const { return points_; }

    bool operator==(const Grid& other) const = default;

private:
    std::vector<double> points_;
};

/// One functional observation.
class Curve {
public:
    Curve() = default;
    Curve(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double time(std::size_t i) const { return grid_[i]; }
    double value(std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<double> values_;
};

enum class Regime { Regular, Irregular, Fragmented };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

class FunctionalDataset {
public:
    FunctionalDataset() = default;
    /// Validates n >= 3 and, for Regular, that every curve shares one grid.
    FunctionalDataset(std::vector<Curve> curves, Regime regime,
                      std::vector<std::string> ids = {});

    std::size_t size() const { return curves_.size(); }
    Regime regime() const { return regime_; }
    const Curve& operator[](std::size_t i) const { return curves_[i]; }
    const std::vector<Curve>& curves() const { return curves_; }
    /// Curve identifiers; defaults to "1".."n".
    const std::vector<std::string>& ids() const { return ids_; }

    /// Shared grid of a Regular dataset.
    const Grid& common_grid() const;

private:
    std::vector<Curve> curves_;
    Regime regime_ = Regime::Regular;
    std::vector<std::string> ids_;
};

/// A partition of {0..n-1} into K non-empty clusters, stored with
/// 1-based cluster indices renumbered by order of first appearance.
class Partition {
public:
    Partition() = default;

    std::size_t size() const { return labels_.size(); }
    int clusters() const { return k_; }
    const std::vector<int>& labels() const { return labels_; }
    int operator[](std::size_t i) const { return labels_[i]; }
    std::vector<std::size_t> cluster_sizes() const;
    /// Members of each cluster, clusters ordered 1..K.
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const Partition& other) const = default;

private:
    friend Partition partition_from_labels(std::span<const int> raw);
    std::vector<int> labels_;
    int k_ = 0;
};

/// Canonicalizes any integer labelling. Throws DataError on empty input.
Partition partition_from_labels(std::span<const int> raw);
Partition partition_from_labels(std::span<const std::string> raw);

/// n x M matrix of projections; row i is the projected vector of curve i.
class ProjectedMatrix {
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    ProjectedMatrix() = default;
    explicit ProjectedMatrix(Storage entries);

    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    const Storage& entries() const { return entries_; }
    std::span<const double> row(Eigen::Index i) const {
        return {entries_.data() + i * entries_.cols(), static_cast<std::size_t>(entries_.cols())};
    }

private:
    Storage entries_;
};

/// Symmetric n x n matrix with zero diagonal and non-negative entries.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    /// Validates symmetry (exact), zero diagonal and non-negativity.
    explicit DissimilarityMatrix(Eigen::MatrixXd entries);

    Eigen::Index size() const { return entries_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
    const Eigen::MatrixXd& entries() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

struct Record {
    std::string curve_id;
    double time = 0.0;
    double value = 0.0;
};

/// Groups records by curve id, sorts each curve by time and infers the
/// regime (Regular iff all grids match). Fragmented must be requested.
/// Curves are ordered by id, numerically when both ids are integers.
FunctionalDataset build_dataset(std::span<const Record> records, bool fragmented = false);

/// Ordering used for curve ids: numeric when both parse as integers.
bool curve_id_less(const std::string& a, const std::string& b);

}  // namespace terp
