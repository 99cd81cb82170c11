#include "terp/pipeline.hpp"

#include "terp/madd.hpp"
#include "terp/parallel.hpp"
#include "terp/quadrature.hpp"

#include <algorithm>
#include <set>

namespace terp {

namespace {

// Stream tags below a combination seed.
constexpr std::uint64_t kStageOne = 1;
constexpr std::uint64_t kStageTwo = 2;
constexpr std::uint64_t kDirections = 0;
constexpr std::uint64_t kOptimizer = 1;

OptimizerConfig with_seed(OptimizerConfig cfg, SeedSpec seed) {
    cfg.seed = std::move(seed);
    return cfg;
}

StageOneResult cluster_projections(ProjectedMatrix projected, int clusters, const OptimizerConfig& optimizer) {
    const DissimilarityMatrix rho = madd_matrix(projected);
    OptimizeResult best = optimize(rho, clusters, optimizer);
    return {std::move(best.partition), best.cost, std::move(projected)};
}

}  // namespace

void EnsembleConfig::validate() const {
    if (families.empty()) throw ConfigError("at least one projection family is required");
    for (const auto& f : families) terp::validate(f);
    if (m_set.empty()) throw ConfigError("the M set must not be empty");
    for (std::size_t i = 0; i < m_set.size(); ++i) {
        if (m_set[i] < 1) throw ConfigError("every M must be positive");
        if (i > 0 && m_set[i] <= m_set[i - 1]) throw ConfigError("the M set must be strictly increasing");
    }
    optimizer.validate();
    smoother.validate();
}

Grid union_grid(const FunctionalDataset& data) {
    std::set<double> all;
    for (const auto& c : data.curves()) all.insert(c.grid().points().begin(), c.grid().points().end());
    return Grid(std::vector<double>(all.begin(), all.end()));
}

ProjectedMatrix project(const FunctionalDataset& data, const Grid& direction_grid, const Eigen::MatrixXd& directions) {
    if (directions.rows() != static_cast<Eigen::Index>(direction_grid.size())) {
        throw DataError("direction matrix rows do not match the direction grid");
    }
    const auto rule = QuadratureRule::for_regime(data.regime());
    const auto n = static_cast<Eigen::Index>(data.size());
    // operator(i, g): quadrature weight times curve value routed to direction grid point g
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, directions.rows());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& curve = data[static_cast<std::size_t>(i)];
        const auto w = quadrature_weights(curve.grid(), rule);
        const auto stencils = interpolation_stencils(direction_grid, curve.grid());
        for (std::size_t k = 0; k < curve.size(); ++k) {
            const double mass = w[k] * curve.value(k);
            const auto lo = static_cast<Eigen::Index>(stencils[k].lower);
            const double u = stencils[k].upper_weight;
            op(i, lo) += (1.0 - u) * mass;
            if (u != 0.0) op(i, lo + 1) += u * mass;
        }
    }
    ProjectedMatrix::Storage p = op * directions;
    return ProjectedMatrix(std::move(p));
}

StageOneResult stage_one(const FunctionalDataset& data, const ProjectionFamily& family, std::size_t m, int clusters,
                         const SeedSpec& seed, const OptimizerConfig& optimizer) {
    if (m < 1) throw ConfigError("M must be at least 1");
    if (clusters < 2 || clusters >= static_cast<int>(data.size())) {
        throw ConfigError("K must satisfy 2 <= K < n");
    }
    const Grid grid = data.regime() == Regime::Regular ? data.common_grid() : union_grid(data);
    const Eigen::MatrixXd directions = sample_paths(family, grid, seed.child(kDirections), m);
    return cluster_projections(project(data, grid, directions), clusters,
                               with_seed(optimizer, seed.child(kOptimizer)));
}

StageTwoResult stage_two(const FunctionalDataset& data, const Partition& stage1, std::size_t m, int clusters,
                         const EnsembleConfig& cfg, const SeedSpec& seed) {
    if (stage1.size() != data.size()) throw DataError("stage-1 partition does not cover the dataset");
    StageTwoResult out;
    try {
        auto pooled = data.regime() == Regime::Regular
                          ? pooled_eigenpairs_regular(data, stage1, cfg.variance_cutoff)
                          : pooled_eigenpairs_irregular(data, stage1, cfg.smoother, cfg.variance_cutoff);
        if (pooled.system.degenerate()) {
            out.skip_reason = "degenerate covariance";
            return out;
        }
        const Grid grid = pooled.system.grid();
        const Eigen::MatrixXd directions = sample_kl_matrix(pooled.system, m, seed.child(kDirections));
        auto result = cluster_projections(project(data, grid, directions), clusters,
                                          with_seed(cfg.optimizer, seed.child(kOptimizer)));
        out.partition = std::move(result.partition);
        out.cost = result.cost;
    } catch (const ClusterTooSmall&) {
        out.skip_reason = "cluster too small";
    } catch (const DegenerateError& e) {
        out.skip_reason = e.what();
    }
    return out;
}

std::optional<double> CombinationRecord::v() const {
    if (!stage1_cost) return std::nullopt;
    if (stage2_cost) return std::min(*stage1_cost, *stage2_cost);
    return stage1_cost;
}

Selection select_best(const std::vector<CombinationRecord>& records) {
    std::optional<Selection> best;
    double best_cost = 0.0;
    for (const auto& r : records) {
        const auto v = r.v();
        if (!v) continue;
        const bool better = !best || *v < best_cost ||
                            (*v == best_cost && std::pair(r.family_index, r.m_index) <
                                                    std::pair(best->family_index, best->m_index));
        if (better) {
            best = Selection{r.family_index, r.m_index, (r.stage2_cost && *r.stage2_cost < *r.stage1_cost) ? 2 : 1};
            best_cost = *v;
        }
    }
    if (!best) {
        std::string detail;
        for (const auto& r : records) {
            detail += "\n  " + r.family + " M=" + std::to_string(r.m) + ": " + r.stage1_failure;
        }
        throw DegenerateError("every (family, M) combination failed:" + detail);
    }
    return *best;
}

const CombinationRecord& EnsembleResult::record(std::size_t family_index, std::size_t m_index) const {
    for (const auto& r : records) {
        if (r.family_index == family_index && r.m_index == m_index) return r;
    }
    throw DataError("no such combination");
}

EnsembleResult run_ensemble(const FunctionalDataset& data, const EnsembleConfig& cfg) {
    cfg.validate();
    if (cfg.clusters < 2 || cfg.clusters >= static_cast<int>(data.size())) {
        throw ConfigError("K must satisfy 2 <= K < n (K=" + std::to_string(cfg.clusters) + ", n=" +
                          std::to_string(data.size()) + ")");
    }
    const std::size_t per_family = cfg.m_set.size();
    std::vector<CombinationRecord> records(cfg.families.size() * per_family);

    detail::parallel_for(records.size(), cfg.threads, [&](std::size_t idx) {
        CombinationRecord& rec = records[idx];
        rec.family_index = idx / per_family;
        rec.m_index = idx % per_family;
        rec.family = family_name(cfg.families[rec.family_index]);
        rec.m = cfg.m_set[rec.m_index];
        const SeedSpec combo = cfg.seed.child({rec.family_index, rec.m_index});
        try {
            auto s1 = stage_one(data, cfg.families[rec.family_index], rec.m, cfg.clusters, combo.child(kStageOne),
                                cfg.optimizer);
            rec.stage1 = std::move(s1.partition);
            rec.stage1_cost = s1.cost;
        } catch (const DegenerateError& e) {
            rec.stage1_failure = e.what();
            return;
        }
        auto s2 = stage_two(data, *rec.stage1, rec.m, cfg.clusters, cfg, combo.child(kStageTwo));
        rec.stage2 = std::move(s2.partition);
        rec.stage2_cost = s2.cost;
        rec.stage2_skip = std::move(s2.skip_reason);
    });

    EnsembleResult result;
    result.records = std::move(records);
    result.selected = select_best(result.records);
    const auto& chosen = result.record(result.selected.family_index, result.selected.m_index);
    result.selected_family = chosen.family;
    result.selected_m = chosen.m;
    result.partition = result.selected.stage == 2 ? *chosen.stage2 : *chosen.stage1;
    result.cost = *chosen.v();
    for (const auto& r : result.records) {
        if (!r.stage1_failure.empty() || !r.stage2_skip.empty()) result.fallback = true;
    }
    return result;
}

}  // namespace terp
