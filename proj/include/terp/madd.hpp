#pragma once

#include "terp/core_types.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace terp {

/// d(v, w) = (1/M) sum_q (1 - exp(-|v_q - w_q|)), always in [0, 1).
double base_distance(std::span<const double> v, std::span<const double> w);

/// Pairwise base distances between rows of P.
Eigen::MatrixXd base_distance_matrix(const ProjectedMatrix& projected);

/// Mean Absolute Difference of Distances between every pair of rows:
/// rho(i,j) = sum_{u != i,j} |d(i,u) - d(j,u)| / (n - 2). Needs n >= 3.
DissimilarityMatrix madd_matrix(const ProjectedMatrix& projected);
DissimilarityMatrix madd_from_distances(const Eigen::MatrixXd& distances);

/// Expected base distances between K populations of known sizes.
struct PopulationSpec {
    std::vector<int> sizes;   // n_1..n_K, each >= 2
    Eigen::MatrixXd dstar;    // symmetric, entries in [0, 1)

    void validate() const;
};

/// Population MADD between populations a and b (0-based):
/// {(n_a-1)|d_ab - d_aa| + (n_b-1)|d_ab - d_bb| + sum_{c != a,b} n_c |d_ac - d_bc|} / (n-2).
double population_madd(const PopulationSpec& spec, int a, int b);

}  // namespace terp
