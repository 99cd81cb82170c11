#include "terp/gp_sampler.hpp"

#include "terp/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace terp {

EigenSystem::EigenSystem(Grid grid, std::vector<double> eigenvalues, Eigen::MatrixXd eigenfunctions)
    : grid_(std::move(grid)), eigenvalues_(std::move(eigenvalues)), eigenfunctions_(std::move(eigenfunctions)) {
    if (eigenvalues_.empty()) {
        throw DataError("eigen system needs at least one eigenpair");
    }
    if (eigenfunctions_.rows() != static_cast<Eigen::Index>(grid_.size()) ||
        eigenfunctions_.cols() != static_cast<Eigen::Index>(eigenvalues_.size())) {
        throw DataError("eigenfunction matrix shape does not match grid and eigenvalue count");
    }
    for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
        double& lambda = eigenvalues_[j];
        if (!std::isfinite(lambda) || lambda < -1e-10) {
            throw DataError("eigenvalue " + std::to_string(lambda) + " is negative");
        }
        if (lambda < 0.0) {
            lambda = 0.0;
        }
        if (j > 0 && lambda > eigenvalues_[j - 1]) {
            throw DataError("eigenvalues must be sorted non-increasing");
        }
    }
    const auto w = quadrature_weights(grid_);
    const Eigen::Map<const Eigen::VectorXd> weights(w.data(), static_cast<Eigen::Index>(w.size()));
    const Eigen::MatrixXd gram = eigenfunctions_.transpose() * weights.asDiagonal() * eigenfunctions_;
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    if ((gram - identity).cwiseAbs().maxCoeff() > 1e-6) {
        throw DataError("eigenfunctions are not orthonormal in L2");
    }
}

Curve EigenSystem::eigenfunction(std::size_t j) const {
    const auto col = eigenfunctions_.col(static_cast<Eigen::Index>(j));
    return Curve(grid_, std::vector<double>(col.data(), col.data() + col.size()));
}

bool EigenSystem::degenerate() const {
    for (double l : eigenvalues_) {
        if (l > 0.0) return false;
    }
    return true;
}

std::vector<ProjectionFamily> default_families() {
    return {BrownianMotion{}, BrownianBridge{}, HaarPoly{}, HaarExp{}, FourierPoly{}, FourierExp{}};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string family_name(const ProjectionFamily& family) {
    return std::visit(overloaded{
                          [](const BrownianMotion&) { return std::string("bm"); },
                          [](const BrownianBridge&) { return std::string("bb"); },
                          [](const HaarPoly&) { return std::string("haar-poly"); },
                          [](const HaarExp&) { return std::string("haar-exp"); },
                          [](const FourierPoly&) { return std::string("fourier-poly"); },
                          [](const FourierExp&) { return std::string("fourier-exp"); },
                          [](const Estimated&) { return std::string("estimated"); },
                      },
                      family);
}

ProjectionFamily family_from_name(const std::string& name) {
    if (name == "bm") return BrownianMotion{};
    if (name == "bb") return BrownianBridge{};
    if (name == "haar-poly") return HaarPoly{};
    if (name == "haar-exp") return HaarExp{};
    if (name == "fourier-poly") return FourierPoly{};
    if (name == "fourier-exp") return FourierExp{};
    throw ConfigError("unknown projection family '" + name +
                      "' (expected bm, bb, haar-poly, haar-exp, fourier-poly or fourier-exp)");
}

void validate(const ProjectionFamily& family) {
    std::visit(overloaded{
                   [](const BrownianMotion&) {},
                   [](const BrownianBridge&) {},
                   [](const HaarPoly& f) {
                       if (!(f.alpha > 0.0) || f.j_max < 0) throw ConfigError("haar-poly needs alpha > 0 and J_max >= 0");
                   },
                   [](const HaarExp& f) {
                       if (f.j_max < 0) throw ConfigError("haar-exp needs J_max >= 0");
                   },
                   [](const FourierPoly& f) {
                       if (!(f.alpha > 0.0) || f.k_max < 1) throw ConfigError("fourier-poly needs alpha > 0 and K_max >= 1");
                   },
                   [](const FourierExp& f) {
                       if (f.k_max < 1) throw ConfigError("fourier-exp needs K_max >= 1");
                   },
                   [](const Estimated& f) {
                       if (!f.system) throw ConfigError("estimated family has no eigen system");
                   },
               },
               family);
}

double haar_poly_weight(int j, int k, double alpha) {
    return std::pow(std::ldexp(1.0, j) + k, -alpha / 2.0);
}

double haar_exp_weight(int j, int k) {
    const double kk = static_cast<double>(k);
    return std::exp(-(std::ldexp(1.0, j) + kk * kk) / 20000.0);
}

double fourier_poly_weight(int k, double alpha) {
    return std::pow(static_cast<double>(k), -alpha / 2.0);
}

double fourier_exp_weight(int k) {
    const double kk = static_cast<double>(k);
    return std::exp(-kk * kk / 20000.0);
}

double haar_wavelet(int j, int k, double t) {
    const double scale = std::ldexp(1.0, j);
    const double left = (k - 1) / scale;
    const double mid = (k - 0.5) / scale;
    const double right = k / scale;
    const double height = std::sqrt(scale);
    if (t >= left && t < mid) return height;
    if (t >= mid && t < right) return -height;
    return 0.0;
}

namespace {

// Basis evaluated at grid points, one column per coefficient; weights folded in.
Eigen::MatrixXd haar_basis(const Grid& grid, int j_max, auto weight) {
    const Eigen::Index terms = (Eigen::Index{1} << (j_max + 1)) - 1;
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(grid.size()), terms);
    Eigen::Index col = 0;
    for (int j = 0; j <= j_max; ++j) {
        const int count = 1 << j;
        for (int k = 1; k <= count; ++k, ++col) {
            const double w = weight(j, k);
            for (std::size_t g = 0; g < grid.size(); ++g) {
                basis(static_cast<Eigen::Index>(g), col) = w * haar_wavelet(j, k, grid[g]);
            }
        }
    }
    return basis;
}

Eigen::MatrixXd fourier_basis(const Grid& grid, int k_max, auto weight) {
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(grid.size()), 2 * k_max);
    for (int k = 1; k <= k_max; ++k) {
        const double w = weight(k);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double arg = 2.0 * std::numbers::pi * k * grid[g];
            basis(static_cast<Eigen::Index>(g), 2 * (k - 1)) = w * std::sin(arg);
            basis(static_cast<Eigen::Index>(g), 2 * (k - 1) + 1) = w * std::cos(arg);
        }
    }
    return basis;
}

// Exact simulation of Brownian motion at the grid points (plus t=1 for the bridge).
void brownian_column(const Grid& grid, bool bridge, std::mt19937_64& engine, double* out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double level = 0.0;
    double previous = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double dt = grid[g] - previous;
        level += std::sqrt(dt) * normal(engine);
        out[g] = level;
        previous = grid[g];
    }
    if (!bridge) {
        return;
    }
    double at_one = level;
    if (grid.back() < 1.0) {
        at_one += std::sqrt(1.0 - grid.back()) * normal(engine);
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out[g] -= grid[g] * at_one;
    }
    if (grid.back() == 1.0) {
        out[grid.size() - 1] = 0.0;
    }
}

class PathSampler {
public:
    PathSampler(const ProjectionFamily& family, const Grid& grid) : family_(family), grid_(grid) {
        validate(family);
        std::visit(overloaded{
                       [](const BrownianMotion&) {},
                       [](const BrownianBridge&) {},
                       [&](const HaarPoly& f) {
                           basis_ = haar_basis(grid, f.j_max, [&](int j, int k) { return haar_poly_weight(j, k, f.alpha); });
                       },
                       [&](const HaarExp& f) { basis_ = haar_basis(grid, f.j_max, haar_exp_weight); },
                       [&](const FourierPoly& f) {
                           basis_ = fourier_basis(grid, f.k_max, [&](int k) { return fourier_poly_weight(k, f.alpha); });
                       },
                       [&](const FourierExp& f) { basis_ = fourier_basis(grid, f.k_max, fourier_exp_weight); },
                       [&](const Estimated& f) {
                           if (f.system->degenerate()) {
                               throw DegenerateError("degenerate covariance: every eigenvalue is zero");
                           }
                           Eigen::MatrixXd kl = f.system->eigenfunctions();
                           for (std::size_t j = 0; j < f.system->size(); ++j) {
                               kl.col(static_cast<Eigen::Index>(j)) *= std::sqrt(f.system->eigenvalues()[j]);
                           }
                           if (f.system->grid() == grid) {
                               basis_ = std::move(kl);
                           } else {
                               const auto st = interpolation_stencils(f.system->grid(), grid);
                               basis_.resize(static_cast<Eigen::Index>(grid.size()), kl.cols());
                               for (std::size_t g = 0; g < st.size(); ++g) {
                                   const auto lo = static_cast<Eigen::Index>(st[g].lower);
                                   const double u = st[g].upper_weight;
                                   basis_.row(static_cast<Eigen::Index>(g)) =
                                       u == 0.0 ? Eigen::RowVectorXd(kl.row(lo))
                                                : Eigen::RowVectorXd((1.0 - u) * kl.row(lo) + u * kl.row(lo + 1));
                               }
                           }
                       },
                   },
                   family);
    }

    void draw(std::mt19937_64& engine, double* out) const {
        if (std::holds_alternative<BrownianMotion>(family_)) {
            brownian_column(grid_, false, engine, out);
            return;
        }
        if (std::holds_alternative<BrownianBridge>(family_)) {
            brownian_column(grid_, true, engine, out);
            return;
        }
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd coef(basis_.cols());
        for (Eigen::Index p = 0; p < coef.size(); ++p) {
            coef(p) = normal(engine);
        }
        Eigen::Map<Eigen::VectorXd>(out, basis_.rows()).noalias() = basis_ * coef;
    }

private:
    const ProjectionFamily& family_;
    const Grid& grid_;
    Eigen::MatrixXd basis_;
};

}  // namespace

Curve sample_path(const ProjectionFamily& family, const Grid& grid, const SeedSpec& seed) {
    PathSampler sampler(family, grid);
    std::vector<double> values(grid.size());
    auto engine = seed.engine();
    sampler.draw(engine, values.data());
    return Curve(grid, std::move(values));
}

Eigen::MatrixXd sample_paths(const ProjectionFamily& family, const Grid& grid, const SeedSpec& seed,
                             std::size_t count) {
    PathSampler sampler(family, grid);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(count));
    for (std::size_t q = 0; q < count; ++q) {
        auto engine = seed.child(q).engine();
        sampler.draw(engine, out.col(static_cast<Eigen::Index>(q)).data());
    }
    return out;
}

Eigen::MatrixXd sample_kl_matrix(const EigenSystem& system, std::size_t count, const SeedSpec& seed) {
    if (count < 1) {
        throw ConfigError("sample_kl needs at least one path");
    }
    auto shared = std::make_shared<const EigenSystem>(system);
    return sample_paths(Estimated{shared}, system.grid(), seed, count);
}

std::vector<Curve> sample_kl(const EigenSystem& system, std::size_t count, const SeedSpec& seed) {
    const Eigen::MatrixXd paths = sample_kl_matrix(system, count, seed);
    std::vector<Curve> out;
    out.reserve(count);
    for (Eigen::Index q = 0; q < paths.cols(); ++q) {
        out.emplace_back(system.grid(), std::vector<double>(paths.col(q).data(), paths.col(q).data() + paths.rows()));
    }
    return out;
}

}  // namespace terp
