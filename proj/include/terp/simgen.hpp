#pragma once

#include "terp/core_types.hpp"
#include "terp/seed.hpp"

#include <vector>

namespace terp {

/// One of the ten benchmark models. Models 1-6 have two populations,
/// Models 7-10 three.
struct ModelSpec {
    int model = 1;
    std::vector<int> sizes = {30, 30};
    Grid grid = Grid::equispaced(100);
    SeedSpec seed;

    void validate() const;
};

int population_count(int model);

struct LabeledDataset {
    FunctionalDataset dataset;
    Partition truth;
};

/// Population mean function mu_l(t) (l is 0-based); zero for models whose
/// populations differ only in covariance.
double model_mean(int model, int population, double t);

/// Karhunen-Loeve variances theta_j (j >= 1) for population l (0-based).
/// Models 6 and 10 have no finite expansion and throw ConfigError.
double model_eigenvalue(int model, int population, int j);

/// Eigenfunction phi_j(t) used by the model (sqrt(2) sin(j pi t), or
/// sqrt(2) sin(2 j pi t) for Model 3).
double model_eigenfunction(int model, int j, double t);

/// Number of expansion terms in Models 1-5 and 7-9.
inline constexpr int kModelTerms = 40;

/// Draws t_3 / sqrt(3): unit variance, heavy tails.
double scaled_t3(std::mt19937_64& engine);

/// Curves in population order: the first sizes[0] curves come from
/// population 1, and so on. Curve i uses seed.child(i).
LabeledDataset generate_model(const ModelSpec& spec);

/// Keeps `keep` points per curve, drawn without replacement from the
/// curve's `fine_size`-point regular grid. Curve i uses seed.child(i).
LabeledDataset irregularize(const LabeledDataset& data, std::size_t fine_size, std::size_t keep, const SeedSpec& seed);

/// Splits [0,1] into `segments` equal sub-intervals (the last one closed),
/// and removes one uniformly chosen sub-interval from every curve.
LabeledDataset fragment(const LabeledDataset& data, int segments, const SeedSpec& seed);

/// 1-based sub-interval that fragment() removes from each curve for `seed`.
std::vector<int> fragment_segments(std::size_t curves, int segments, const SeedSpec& seed);

}  // namespace terp
