#include "terp/simgen.hpp"

#include "terp/gp_sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace terp {

namespace {

constexpr std::array<std::array<double, 4>, 3> kCoefficientShifts = {{
    {0.0, -0.5, 1.0, -0.5},
    {0.0, -0.75, 0.75, -0.75},
    {0.0, -1.0, 0.5, -1.0},
}};

bool bridge_model(int model) { return model == 6 || model == 10; }
bool heavy_tailed(int model) { return model == 3 || model == 4; }

}  // namespace

int population_count(int model) {
    if (model >= 1 && model <= 6) return 2;
    if (model >= 7 && model <= 10) return 3;
    throw ConfigError("unknown model id " + std::to_string(model) + " (expected 1..10)");
}

void ModelSpec::validate() const {
    const int pops = population_count(model);
    if (static_cast<int>(sizes.size()) != pops) {
        throw ConfigError("model " + std::to_string(model) + " needs " + std::to_string(pops) + " population sizes");
    }
    for (int s : sizes) {
        if (s < 1) throw ConfigError("population sizes must be positive");
    }
}

double model_eigenfunction(int model, int j, double t) {
    const double freq = model == 3 ? 2.0 * j : static_cast<double>(j);
    return std::numbers::sqrt2 * std::sin(freq * std::numbers::pi * t);
}

double model_eigenvalue(int model, int population, int j) {
    const double jj = static_cast<double>(j);
    switch (model) {
        case 1:
        case 3:
        case 7:
            return std::pow(jj, -1.05);
        case 5:
        case 9:
            return std::pow(jj, -2.0);
        case 2:
            return population == 0 ? std::pow(jj, -2.0) : std::pow(2.0, -jj);
        case 4:
            return population == 0 ? std::pow(jj, -2.0) : std::exp(-jj);
        case 8:
            if (population == 0) return std::pow(jj, -2.0);
            if (population == 1) return std::pow(4.0, -jj);
            return std::exp(-jj);
        default:
            break;
    }
    throw ConfigError("model " + std::to_string(model) + " has no finite expansion");
}

double model_mean(int model, int population, double t) {
    switch (model) {
        case 1:
            return population == 0 ? 2.0 * (t * t - 1.0 / 3.0) : 0.0;
        case 3:
            return population == 0 ? std::sqrt(std::abs(t - 0.5)) : 0.0;
        case 5:
        case 9: {
            double mu = 0.0;
            const auto& shift = kCoefficientShifts[static_cast<std::size_t>(population)];
            for (int j = 1; j <= 4; ++j) mu += shift[static_cast<std::size_t>(j - 1)] * model_eigenfunction(model, j, t);
            return mu;
        }
        case 6:
        case 10:
            if (population == 1) return std::sqrt(t);
            if (population == 2) return -std::sqrt(t);
            return 0.0;
        case 7:
            if (population == 0) return 2.0 * (t * t - 1.0 / 3.0);
            if (population == 2) return -2.0 * (t * t - 1.0 / 3.0);
            return 0.0;
        case 2:
        case 4:
        case 8:
            return 0.0;
        default:
            break;
    }
    throw ConfigError("unknown model id " + std::to_string(model));
}

double scaled_t3(std::mt19937_64& engine) {
    std::student_t_distribution<double> t3(3.0);
    return t3(engine) / std::sqrt(3.0);
}

LabeledDataset generate_model(const ModelSpec& spec) {
    spec.validate();
    const Grid& grid = spec.grid;
    const std::size_t g = grid.size();

    Eigen::MatrixXd basis;
    if (!bridge_model(spec.model)) {
        basis.resize(static_cast<Eigen::Index>(g), kModelTerms);
        for (std::size_t p = 0; p < g; ++p) {
            for (int j = 1; j <= kModelTerms; ++j) {
                basis(static_cast<Eigen::Index>(p), j - 1) = model_eigenfunction(spec.model, j, grid[p]);
            }
        }
    }

    std::vector<Curve> curves;
    std::vector<int> labels;
    std::size_t index = 0;
    for (int pop = 0; pop < static_cast<int>(spec.sizes.size()); ++pop) {
        std::vector<double> mean(g);
        for (std::size_t p = 0; p < g; ++p) mean[p] = model_mean(spec.model, pop, grid[p]);

        for (int c = 0; c < spec.sizes[static_cast<std::size_t>(pop)]; ++c, ++index) {
            const SeedSpec curve_seed = spec.seed.child(index);
            std::vector<double> values(g);
            if (bridge_model(spec.model)) {
                values = sample_path(BrownianBridge{}, grid, curve_seed).values();
            } else {
                auto engine = curve_seed.engine();
                std::normal_distribution<double> normal(0.0, 1.0);
                Eigen::VectorXd scores(kModelTerms);
                for (int j = 1; j <= kModelTerms; ++j) {
                    const double z = heavy_tailed(spec.model) ? scaled_t3(engine) : normal(engine);
                    scores(j - 1) = std::sqrt(model_eigenvalue(spec.model, pop, j)) * z;
                }
                const Eigen::VectorXd path = basis * scores;
                std::copy(path.data(), path.data() + path.size(), values.begin());
            }
            for (std::size_t p = 0; p < g; ++p) values[p] += mean[p];
            curves.emplace_back(grid, std::move(values));
            labels.push_back(pop + 1);
        }
    }
    FunctionalDataset data(std::move(curves), Regime::Regular);
    return {std::move(data), partition_from_labels(std::span<const int>(labels))};
}

LabeledDataset irregularize(const LabeledDataset& data, std::size_t fine_size, std::size_t keep, const SeedSpec& seed) {
    if (keep > fine_size) throw ConfigError("cannot keep more points than the fine grid holds");
    if (keep < 2) throw ConfigError("irregular curves need at least two points");
    const auto& ds = data.dataset;
    if (ds.regime() != Regime::Regular || ds.common_grid().size() != fine_size) {
        throw DataError("irregularize needs data on a regular " + std::to_string(fine_size) + "-point grid");
    }
    std::vector<std::size_t> all(fine_size);
    std::iota(all.begin(), all.end(), std::size_t{0});

    std::vector<Curve> curves;
    curves.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto engine = seed.child(i).engine();
        std::vector<std::size_t> picked;
        picked.reserve(keep);
        std::sample(all.begin(), all.end(), std::back_inserter(picked), keep, engine);
        std::vector<double> t;
        std::vector<double> v;
        for (auto k : picked) {
            t.push_back(ds[i].time(k));
            v.push_back(ds[i].value(k));
        }
        curves.emplace_back(Grid(std::move(t)), std::move(v));
    }
    return {FunctionalDataset(std::move(curves), Regime::Irregular, ds.ids()), data.truth};
}

std::vector<int> fragment_segments(std::size_t curves, int segments, const SeedSpec& seed) {
    if (segments < 1) throw ConfigError("fragmentation needs at least one segment");
    std::vector<int> out(curves);
    for (std::size_t i = 0; i < curves; ++i) {
        auto engine = seed.child(i).engine();
        out[i] = std::uniform_int_distribution<int>(1, segments)(engine);
    }
    return out;
}

LabeledDataset fragment(const LabeledDataset& data, int segments, const SeedSpec& seed) {
    const auto& ds = data.dataset;
    if (ds.regime() != Regime::Regular) throw DataError("fragment needs regular input");
    const auto removed = fragment_segments(ds.size(), segments, seed);
    const double width = 1.0 / segments;

    std::vector<Curve> curves;
    curves.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double lo = (removed[i] - 1) * width;
        const double hi = removed[i] * width;
        const bool last = removed[i] == segments;
        std::vector<double> t;
        std::vector<double> v;
        for (std::size_t k = 0; k < ds[i].size(); ++k) {
            const double x = ds[i].time(k);
            const bool inside = x >= lo && (x < hi || (last && x <= 1.0));
            if (!inside) {
                t.push_back(x);
                v.push_back(ds[i].value(k));
            }
        }
        if (t.size() < 2) {
            throw DataError("fragmentation left curve " + ds.ids()[i] + " with fewer than two points");
        }
        curves.emplace_back(Grid(std::move(t)), std::move(v));
    }
    return {FunctionalDataset(std::move(curves), Regime::Fragmented, ds.ids()), data.truth};
}

}  // namespace terp
