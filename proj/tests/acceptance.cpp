// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Pass criterion numbers as arguments to run a subset.

#include "oracles.hpp"
#include "population_oracle.hpp"
#include "terp/covariance.hpp"
#include "terp/evaluation.hpp"
#include "terp/experiment.hpp"
#include "terp/madd.hpp"
#include "terp/partition_optimizer.hpp"
#include "terp/pipeline.hpp"
#include "terp/quadrature.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

using namespace terp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ExperimentReport bench(int model, std::vector<int> sizes, Regime regime, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.model = model;
    cfg.sizes = std::move(sizes);
    cfg.regime = regime;
    cfg.clusters = static_cast<int>(cfg.sizes.size());
    cfg.replicates = 20;
    cfg.master_seed = seed;
    return run_experiment(cfg);
}

Outcome rand_within(const ExperimentReport& r, double target, double tol) {
    const double mean = *r.mean_rand;
    return {std::abs(mean - target) <= tol,
            "mean Rand " + fmt("%.3f", mean) + " (sd " + fmt("%.3f", *r.sd_rand) + "), target " + fmt("%.3f", target) +
                " +- " + fmt("%.2f", tol)};
}

Outcome criterion1() { return rand_within(bench(1, {30, 30}, Regime::Regular, 101), 0.834, 0.10); }

Outcome criterion2() {
    const auto r = bench(2, {30, 30}, Regime::Regular, 102);
    auto out = rand_within(r, 0.832, 0.10);
    int second = 0;
    for (const auto& rep : r.replicates) second += rep.ensemble.selected.stage == 2 ? 1 : 0;
    out.pass = out.pass && 2 * second > static_cast<int>(r.replicates.size());
    out.detail += "; s*=2 in " + std::to_string(second) + "/" + std::to_string(r.replicates.size()) + " replicates";
    return out;
}

Outcome criterion3() { return rand_within(bench(9, {30, 30, 30}, Regime::Regular, 103), 0.933, 0.10); }

Outcome criterion4() { return rand_within(bench(5, {30, 30}, Regime::Irregular, 104), 0.888, 0.10); }

Outcome criterion5() { return rand_within(bench(8, {30, 30, 30}, Regime::Fragmented, 105), 0.722, 0.12); }

// Each check records the first failure it sees.
struct Checks {
    std::vector<std::string> failed;
    int run = 0;
    void expect(bool ok, const std::string& what) {
        ++run;
        if (!ok && std::find(failed.begin(), failed.end(), what) == failed.end()) failed.push_back(what);
    }
};

Outcome criterion6() {
    Checks c;
    std::mt19937_64 rng(606);
    std::normal_distribution<double> z;

    // MADD symmetric, zero diagonal, below one
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 20;
        ProjectedMatrix::Storage s(n, 25);
        for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = 3.0 * z(rng);
        const auto rho = madd_matrix(ProjectedMatrix(s));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                c.expect(rho(i, j) == rho(j, i), "MADD symmetry");
                c.expect(i != j || rho(i, j) == 0.0, "MADD zero diagonal");
                c.expect(rho(i, j) >= 0.0 && rho(i, j) < 1.0, "MADD bounds");
            }
    }

    // optimizer against exhaustive search
    int matched = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6 + trial % 3;
        const int k = 2 + trial % 2;
        const Eigen::MatrixXd m = oracle::random_dissimilarity(n, rng);
        OptimizerConfig cfg;
        cfg.restarts = 20;
        cfg.seed = SeedSpec(static_cast<std::uint64_t>(trial));
        const double got = optimize(DissimilarityMatrix(m), k, cfg).cost;
        matched += std::abs(got - oracle::exhaustive_min(m, k).best) <= 1e-12 ? 1 : 0;
    }
    c.expect(matched == 100, "optimizer vs exhaustive (" + std::to_string(matched) + "/100)");

    // normalized cost boundaries and scale invariance
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 10;
        const Eigen::MatrixXd m = oracle::random_dissimilarity(n, rng);
        const DissimilarityMatrix d(m);
        const std::vector<int> one(static_cast<std::size_t>(n), 1);
        std::vector<int> singles(static_cast<std::size_t>(n));
        std::iota(singles.begin(), singles.end(), 1);
        c.expect(std::abs(normalized_cost(d, partition_from_labels(std::span<const int>(one))) - 1.0) < 1e-14, "cost 1 for K=1");
        c.expect(normalized_cost(d, partition_from_labels(std::span<const int>(singles))) == 0.0, "cost 0 for singletons");
        const auto labels = oracle::random_labels(n, 2, rng);
        const auto p = partition_from_labels(std::span<const int>(labels));
        const double scale = std::exp(std::uniform_real_distribution<double>(-5, 5)(rng));
        c.expect(std::abs(normalized_cost(DissimilarityMatrix(scale * m), p) - normalized_cost(d, p)) <= 1e-12 * normalized_cost(d, p) + 1e-15,
                 "cost scale invariance");
    }

    // Rand index against pair counting
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 40;
        const auto a = oracle::random_labels(n, 1 + trial % 5, rng);
        const auto b = oracle::random_labels(n, 1 + (trial / 5) % 5, rng);
        c.expect(rand_index(partition_from_labels(std::span<const int>(a)), partition_from_labels(std::span<const int>(b))) ==
                     oracle::rand_index(a, b),
                 "Rand index vs brute force");
    }

    // bridge endpoints, motion covariance
    const Grid g11 = Grid::equispaced(11);
    double sxy = 0, sx = 0, sy = 0;
    for (int s = 0; s < 5000; ++s) {
        const Curve bb = sample_path(BrownianBridge{}, g11, SeedSpec(66, {static_cast<std::uint64_t>(s)}));
        c.expect(bb.value(0) == 0.0 && bb.value(10) == 0.0, "BB endpoints");
        const Curve bm = sample_path(BrownianMotion{}, g11, SeedSpec(67, {static_cast<std::uint64_t>(s)}));
        sx += bm.value(3);
        sy += bm.value(7);
        sxy += bm.value(3) * bm.value(7);
    }
    const double cov = sxy / 5000 - (sx / 5000) * (sy / 5000);
    c.expect(std::abs(cov - 0.3) < 0.03, "BM covariance at (0.3, 0.7) = " + fmt("%.4f", cov));

    // KL covariance recovery
    const Grid g51 = Grid::equispaced(51);
    Eigen::MatrixXd phi(51, 3);
    for (int p = 0; p < 51; ++p)
        for (int j = 0; j < 3; ++j) phi(p, j) = std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * g51[static_cast<std::size_t>(p)]);
    const std::vector<double> lambda = {1.0, 0.5, 0.25};
    const Eigen::MatrixXd w = sample_kl_matrix(EigenSystem(g51, lambda, phi), 5000, SeedSpec(68));
    const Eigen::MatrixXd target = phi * Eigen::Vector3d(1.0, 0.5, 0.25).asDiagonal() * phi.transpose();
    const double kl_err = (w * w.transpose() / 5000.0 - target).cwiseAbs().maxCoeff() / target.cwiseAbs().maxCoeff();
    c.expect(kl_err < 0.05, "KL covariance recovery (" + fmt("%.4f", kl_err) + ")");

    // estimated eigenfunctions orthonormal
    for (int trial = 0; trial < 5; ++trial) {
        const auto data = generate_model(ModelSpec{2, {15, 15}, Grid::equispaced(100), SeedSpec(69, {static_cast<std::uint64_t>(trial)})});
        const auto sys = pooled_eigenpairs_regular(data.dataset, data.truth).system;
        for (std::size_t i = 0; i < sys.size(); ++i)
            for (std::size_t j = 0; j < sys.size(); ++j)
                c.expect(std::abs(inner_product(sys.eigenfunction(i), sys.eigenfunction(j)) - (i == j ? 1.0 : 0.0)) < 1e-6,
                         "eigenfunction orthonormality");
    }

    // population MADD hand value
    PopulationSpec spec{{3, 3}, Eigen::MatrixXd(2, 2)};
    spec.dstar << 0.2, 0.5, 0.5, 0.3;
    c.expect(std::abs(population_madd(spec, 0, 1) - 0.25) < 1e-15, "population MADD hand value");

    std::string detail = std::to_string(c.run) + " checks";
    for (const auto& f : c.failed) detail += "; failed: " + f;
    return {c.failed.empty(), detail};
}

Outcome criterion7() {
    const Grid g = Grid::equispaced(100);
    const auto differ = oracle::population_rho(
        oracle::sample_pairs(g, oracle::bridge, oracle::shifted_bridge, BrownianMotion{}, 100, 20000, SeedSpec(701)), 30, 30);
    const auto same = oracle::population_rho(
        oracle::sample_pairs(g, oracle::bridge, oracle::bridge, BrownianMotion{}, 100, 20000, SeedSpec(702)), 30, 30);
    const bool ok = differ.rho > 5.0 * differ.se && same.rho < 3.0 * same.se;
    return {ok, "BB vs BB+sqrt(t): rho* " + fmt("%.5f", differ.rho) + " = " + fmt("%.1f", differ.rho / differ.se) +
                    " SE; identical: rho* " + fmt("%.5f", same.rho) + " = " + fmt("%.2f", same.rho / same.se) + " SE"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion8() {
    const fs::path root = fs::temp_directory_path() / "terp_acceptance_determinism";
    fs::remove_all(root);
    const std::string args = " bench --model 2 --sizes 30,30 --reps 3 --seed 808 --out ";
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string(TERP_CLI_PATH) + args + (root / run).string() + " > /dev/null";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "bench run failed"};
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(root / "a")) {
        const fs::path other = root / "b" / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
            fs::remove_all(root);
            return {false, e.path().filename().string() + " differs"};
        }
        ++files;
    }
    fs::remove_all(root);
    return {files > 0, std::to_string(files) + " files byte-identical across two runs"};
}

Outcome criterion9() {
    const auto data = generate_model(ModelSpec{1, {100, 100}, Grid::equispaced(100), SeedSpec(909)});
    EnsembleConfig cfg;
    const std::vector<std::size_t> ms = {10, 50, 100, 500, 1000};
    std::vector<double> seconds;
    for (std::size_t m : ms) {
        std::vector<double> runs;
        for (int rep = 0; rep < 3; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const auto s1 = stage_one(data.dataset, BrownianMotion{}, m, 2, SeedSpec(910, {m}), cfg.optimizer);
            stage_two(data.dataset, s1.partition, m, 2, cfg, SeedSpec(911, {m}));
            runs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::sort(runs.begin(), runs.end());
        seconds.push_back(runs[1]);
    }
    const bool monotone = std::is_sorted(seconds.begin(), seconds.end());
    const double ratio = seconds.back() / seconds.front();
    std::string detail = "median seconds per iteration at M=10..1000:";
    for (double s : seconds) detail += fmt(" %.4f", s);
    detail += "; ratio " + fmt("%.1f", ratio);
    return {monotone && ratio < 150.0, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                               criterion6, criterion7, criterion8, criterion9};
    bool all = true;
    for (int k = 1; k <= 9; ++k) {
        if (!wanted.empty() && !wanted.count(k)) continue;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s  %s  [%.1fs]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
