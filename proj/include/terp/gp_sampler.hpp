#pragma once

#include "terp/core_types.hpp"
#include "terp/seed.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace terp {

/// Eigenpairs of a covariance operator evaluated on a common grid.
/// Eigenfunctions are orthonormal under trapezoid quadrature on `grid`.
class EigenSystem {
public:
    /// Clips eigenvalues in [-1e-10, 0) to zero and rejects anything more
    /// negative, unsorted input, or eigenfunctions that are not L2
    /// orthonormal within 1e-6. Column j of `eigenfunctions` is phi_j.
    EigenSystem(Grid grid, std::vector<double> eigenvalues, Eigen::MatrixXd eigenfunctions);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return eigenvalues_.size(); }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
    Curve eigenfunction(std::size_t j) const;
    bool degenerate() const;

private:
    Grid grid_;
    std::vector<double> eigenvalues_;
    Eigen::MatrixXd eigenfunctions_;
};

struct BrownianMotion {};
struct BrownianBridge {};
struct HaarPoly {
    double alpha = 2.0;
    int j_max = 4;
};
struct HaarExp {
    int j_max = 4;
};
struct FourierPoly {
    double alpha = 2.0;
    int k_max = 40;
};
struct FourierExp {
    int k_max = 40;
};
struct Estimated {
    std::shared_ptr<const EigenSystem> system;
};

using ProjectionFamily =
    std::variant<BrownianMotion, BrownianBridge, HaarPoly, HaarExp, FourierPoly, FourierExp, Estimated>;

/// BM, BB, Haar-poly, Haar-exp, Fourier-poly, Fourier-exp with J_max=4,
/// K_max=40 and alpha=2.
std::vector<ProjectionFamily> default_families();

/// Short names: bm, bb, haar-poly, haar-exp, fourier-poly, fourier-exp, estimated.
std::string family_name(const ProjectionFamily& family);
ProjectionFamily family_from_name(const std::string& name);

/// Throws ConfigError if parameters violate alpha>0, J_max>=0, K_max>=1.
void validate(const ProjectionFamily& family);

double haar_poly_weight(int j, int k, double alpha);
double haar_exp_weight(int j, int k);
double fourier_poly_weight(int k, double alpha);
double fourier_exp_weight(int k);

/// L2-normalized Haar wavelet psi_{j,k}, k = 1..2^j, on half-open dyadic intervals.
double haar_wavelet(int j, int k, double t);

/// One realization of `family` at the grid points.
Curve sample_path(const ProjectionFamily& family, const Grid& grid, const SeedSpec& seed);

/// `count` independent realizations as columns; column q equals
/// sample_path(family, grid, seed.child(q)).
Eigen::MatrixXd sample_paths(const ProjectionFamily& family, const Grid& grid, const SeedSpec& seed,
                             std::size_t count);

/// KL draws W_q = sum_j sqrt(lambda_j) xi_{jq} phi_j on the system grid,
/// path q from seed.child(q). Throws DegenerateError when every eigenvalue is zero.
std::vector<Curve> sample_kl(const EigenSystem& system, std::size_t count, const SeedSpec& seed);
Eigen::MatrixXd sample_kl_matrix(const EigenSystem& system, std::size_t count, const SeedSpec& seed);

}  // namespace terp
