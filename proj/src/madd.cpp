#include "terp/madd.hpp"

#include <cmath>
#include <numeric>

namespace terp {

double base_distance(std::span<const double> v, std::span<const double> w) {
    if (v.size() != w.size()) {
        throw DataError("base_distance needs vectors of equal length");
    }
    if (v.empty()) {
        throw DataError("base_distance needs at least one coordinate");
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < v.size(); ++q) {
        sum += -std::expm1(-std::abs(v[q] - w[q]));
    }
    return sum / static_cast<double>(v.size());
}

Eigen::MatrixXd base_distance_matrix(const ProjectedMatrix& projected) {
    const Eigen::Index n = projected.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = base_distance(projected.row(i), projected.row(j));
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

DissimilarityMatrix madd_from_distances(const Eigen::MatrixXd& distances) {
    const Eigen::Index n = distances.rows();
    if (n < 3) {
        throw DataError("MADD needs n >= 3");
    }
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
    const double denom = static_cast<double>(n - 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto di = distances.col(i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto dj = distances.col(j);
            double sum = 0.0;
            for (Eigen::Index u = 0; u < n; ++u) {
                if (u == i || u == j) continue;
                sum += std::abs(di(u) - dj(u));
            }
            rho(i, j) = sum / denom;
            rho(j, i) = rho(i, j);
        }
    }
    return DissimilarityMatrix(std::move(rho));
}

DissimilarityMatrix madd_matrix(const ProjectedMatrix& projected) {
    if (projected.rows() < 3) {
        throw DataError("MADD needs n >= 3");
    }
    return madd_from_distances(base_distance_matrix(projected));
}

void PopulationSpec::validate() const {
    const auto k = static_cast<Eigen::Index>(sizes.size());
    if (k < 1 || dstar.rows() != k || dstar.cols() != k) {
        throw DataError("population spec needs a K x K dstar table");
    }
    for (int s : sizes) {
        if (s < 2) throw DataError("every population needs at least 2 members");
    }
    if (std::accumulate(sizes.begin(), sizes.end(), 0) < 3) {
        throw DataError("population MADD needs n >= 3");
    }
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            const double v = dstar(a, b);
            if (!(v >= 0.0 && v < 1.0) || v != dstar(b, a)) {
                throw DataError("dstar must be symmetric with entries in [0,1)");
            }
        }
    }
}

double population_madd(const PopulationSpec& spec, int a, int b) {
    spec.validate();
    const int k = static_cast<int>(spec.sizes.size());
    if (a == b) {
        throw DataError("population MADD needs two distinct populations");
    }
    if (a < 0 || b < 0 || a >= k || b >= k) {
        throw DataError("population index out of range");
    }
    const auto& d = spec.dstar;
    const int n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), 0);
    double sum = (spec.sizes[a] - 1) * std::abs(d(a, b) - d(a, a)) + (spec.sizes[b] - 1) * std::abs(d(a, b) - d(b, b));
    for (int c = 0; c < k; ++c) {
        if (c == a || c == b) continue;
        sum += spec.sizes[c] * std::abs(d(a, c) - d(b, c));
    }
    return sum / static_cast<double>(n - 2);
}

}  // namespace terp
