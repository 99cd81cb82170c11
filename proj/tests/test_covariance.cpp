#include "terp/covariance.hpp"
#include "terp/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace terp;

namespace {

double phi1(double t) { return std::numbers::sqrt2 * std::sin(std::numbers::pi * t); }

Partition part(const std::vector<int>& labels) { return partition_from_labels(std::span<const int>(labels)); }

// n curves of a * phi1 plus a cluster offset; scores alternate +-1 within each cluster
FunctionalDataset rank_one(const Grid& g, int n, int clusters) {
    std::vector<Curve> curves;
    for (int i = 0; i < n; ++i) {
        const double a = (i / clusters) % 2 == 0 ? 1.0 : -1.0;
        const double shift = 3.0 * (i % clusters);
        std::vector<double> v;
        for (double t : g.points()) v.push_back(a * phi1(t) + shift);
        curves.emplace_back(g, std::move(v));
    }
    return FunctionalDataset(std::move(curves), Regime::Regular);
}

FunctionalDataset random_regular(std::mt19937_64& rng, int n, std::size_t points) {
    const Grid g = Grid::equispaced(points);
    std::normal_distribution<double> z;
    std::vector<Curve> curves;
    for (int i = 0; i < n; ++i) {
        const double a = z(rng), b = z(rng), c = z(rng);
        std::vector<double> v;
        for (double t : g.points()) v.push_back(a * phi1(t) + 0.5 * b * std::cos(2 * std::numbers::pi * t) + 0.2 * c * t + 0.05 * z(rng));
        curves.emplace_back(g, std::move(v));
    }
    return FunctionalDataset(std::move(curves), Regime::Regular);
}

std::vector<int> cyclic_labels(int n, int k) {
    std::vector<int> l;
    for (int i = 0; i < n; ++i) l.push_back(1 + i % k);
    return l;
}

}  // namespace

TEST_CASE("rank-one pooled covariance") {
    const Grid g = Grid::equispaced(101);
    const auto data = rank_one(g, 8, 1);
    std::vector<int> labels(8, 1);
    const auto pooled = pooled_eigenpairs_regular(data, part(labels));
    REQUIRE(pooled.system.size() == 1);
    CHECK(pooled.system.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-3));
    const Curve phi = pooled.system.eigenfunction(0);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(std::abs(phi.value(p)) == doctest::Approx(std::abs(phi1(g[p]))).epsilon(1e-3).scale(1));
}

TEST_CASE("cluster offsets are removed before pooling") {
    const Grid g = Grid::equispaced(101);
    const auto data = rank_one(g, 12, 3);
    const auto pooled = pooled_eigenpairs_regular(data, part(cyclic_labels(12, 3)));
    REQUIRE(pooled.system.size() == 1);
    CHECK(pooled.system.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(pooled.means.means.size() == 3);
    for (int k = 0; k < 3; ++k)
        for (std::size_t p = 0; p < g.size(); ++p) CHECK(pooled.means.means[static_cast<std::size_t>(k)].value(p) == doctest::Approx(3.0 * k));
}

TEST_CASE("pooled eigenfunctions are orthonormal and truncation is minimal") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10 + trial;
        const auto data = random_regular(rng, n, 41 + 6 * trial);
        const int k = 2 + trial % 2;
        const double cutoff = trial % 2 == 0 ? 0.99 : 0.8;
        const auto pooled = pooled_eigenpairs_regular(data, part(cyclic_labels(n, k)), cutoff);
        const auto& sys = pooled.system;
        for (std::size_t i = 0; i < sys.size(); ++i)
            for (std::size_t j = 0; j < sys.size(); ++j)
                CHECK(std::abs(inner_product(sys.eigenfunction(i), sys.eigenfunction(j)) - (i == j ? 1.0 : 0.0)) < 1e-6);

        double total = 0.0;
        for (double l : pooled.raw_eigenvalues) {
            CHECK(l >= -1e-10);
            total += std::max(l, 0.0);
        }
        double kept = 0.0;
        for (double l : sys.eigenvalues()) kept += l;
        CHECK(kept >= cutoff * total * (1 - 1e-12));
        const double without_last = kept - sys.eigenvalues().back();
        CHECK(without_last < cutoff * total);
    }
}

TEST_CASE("cluster-centred residuals have zero mean") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 9 + trial;
        const auto data = random_regular(rng, n, 30);
        const auto p = part(cyclic_labels(n, 3));
        const auto pooled = pooled_eigenpairs_regular(data, p);
        for (int k = 1; k <= 3; ++k) {
            for (std::size_t q = 0; q < data.common_grid().size(); ++q) {
                double s = 0.0;
                for (std::size_t i = 0; i < data.size(); ++i)
                    if (p[i] == k) s += data[i].value(q) - pooled.means.means[static_cast<std::size_t>(k - 1)].value(q);
                CHECK(std::abs(s) < 1e-12);
            }
        }
    }
}

TEST_CASE("relabelling clusters leaves the pooled system unchanged") {
    std::mt19937_64 rng(33);
    const auto data = random_regular(rng, 15, 50);
    const auto a = cyclic_labels(15, 3);
    std::vector<int> b;
    for (int l : a) b.push_back(l == 1 ? 3 : (l == 3 ? 1 : 2));
    const auto pa = pooled_eigenpairs_regular(data, part(a));
    const auto pb = pooled_eigenpairs_regular(data, part(b));
    CHECK((pa.covariance - pb.covariance).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(pa.system.size() == pb.system.size());
    for (std::size_t j = 0; j < pa.system.size(); ++j) CHECK(pa.system.eigenvalues()[j] == doctest::Approx(pb.system.eigenvalues()[j]).epsilon(1e-12));
}

TEST_CASE("singleton cluster is rejected") {
    std::mt19937_64 rng(34);
    const auto data = random_regular(rng, 6, 20);
    try {
        pooled_eigenpairs_regular(data, part({1, 1, 1, 1, 1, 2}));
        FAIL("expected ClusterTooSmall");
    } catch (const ClusterTooSmall& e) {
        CHECK(std::string(e.what()) == "cluster too small for covariance");
    }
    CHECK_THROWS_AS(pooled_eigenpairs_irregular(data, part({1, 1, 1, 1, 1, 2}), SmootherConfig{}), ClusterTooSmall);
}

TEST_CASE("zero residuals give a degenerate system") {
    const Grid g = Grid::equispaced(21);
    std::vector<Curve> curves;
    for (int i = 0; i < 6; ++i) curves.emplace_back(g, std::vector<double>(g.size(), i < 3 ? 1.0 : -2.0));
    const FunctionalDataset data(std::move(curves), Regime::Regular);
    const auto pooled = pooled_eigenpairs_regular(data, part({1, 1, 1, 2, 2, 2}));
    CHECK(pooled.system.degenerate());
    CHECK_THROWS_AS(sample_kl(pooled.system, 3, SeedSpec(1)), DegenerateError);
}

TEST_CASE("irregular path recovers a rank-one system") {
    std::mt19937_64 rng(35);
    std::uniform_int_distribution<int> pick(0, 999);
    std::vector<Curve> curves;
    for (int i = 0; i < 60; ++i) {
        // unit scores of either sign: the surface is exactly phi1 x phi1
        const double a = i % 2 == 0 ? 1.0 : -1.0;
        std::vector<double> t = {0.0, 1.0};
        while (t.size() < 100) t.push_back(pick(rng) / 999.0);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        std::vector<double> v;
        for (double s : t) v.push_back(a * phi1(s));
        curves.emplace_back(Grid(t), std::move(v));
    }
    const FunctionalDataset data(std::move(curves), Regime::Irregular);
    double lambda = 0.0;
    for (const auto& c : data.curves()) {
        const double s = inner_product(c, Curve(c.grid(), [&] {
                                           std::vector<double> v;
                                           for (double t : c.grid().points()) v.push_back(phi1(t));
                                           return v;
                                       }()));
        lambda += s * s;
    }
    lambda /= static_cast<double>(data.size());

    const auto pooled = pooled_eigenpairs_irregular(data, part(std::vector<int>(60, 1)), SmootherConfig{});
    const auto& sys = pooled.system;
    CHECK(std::abs(sys.eigenvalues()[0] - lambda) < 0.1 * lambda);
    const Curve phi = sys.eigenfunction(0);
    double sup = 0.0;
    for (std::size_t p = 0; p < sys.grid().size(); ++p) sup = std::max(sup, std::abs(std::abs(phi.value(p)) - std::abs(phi1(sys.grid()[p]))));
    CHECK(sup < 0.1);
}

TEST_CASE("regular data through the smoothing path agrees with the empirical path") {
    std::mt19937_64 rng(36);
    const auto data = random_regular(rng, 40, 101);
    const auto labels = part(cyclic_labels(40, 2));
    const auto regular = pooled_eigenpairs_regular(data, labels);
    SmootherConfig cfg;
    cfg.mean_bandwidth = 0.01;
    cfg.covariance_bandwidth = 0.01;
    const auto smoothed = pooled_eigenpairs_irregular(data, labels, cfg);
    for (std::size_t j = 0; j < 2; ++j) {
        const double r = regular.system.eigenvalues()[j];
        CHECK(std::abs(smoothed.raw_eigenvalues[j] - r) < 0.15 * r);
    }
}

TEST_CASE("smoothing path errors") {
    std::mt19937_64 rng(37);
    std::vector<Curve> curves;
    // observations only on [0, 0.4] and [0.7, 1]
    std::vector<double> t;
    for (int k = 0; k <= 40; ++k) t.push_back(k / 100.0);
    for (int k = 70; k <= 100; ++k) t.push_back(k / 100.0);
    const Grid holey(t);
    std::normal_distribution<double> z;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> v;
        for (std::size_t p = 0; p < holey.size(); ++p) v.push_back(z(rng));
        curves.emplace_back(holey, std::move(v));
    }
    const FunctionalDataset gappy(curves, Regime::Fragmented);
    try {
        pooled_eigenpairs_irregular(gappy, part({1, 1, 1, 2, 2, 2}), SmootherConfig{});
        FAIL("expected coverage error");
    } catch (const DegenerateError& e) {
        CHECK(std::string(e.what()).find("domain not covered") != std::string::npos);
    }

    const auto data = random_regular(rng, 6, 51);
    SmootherConfig narrow;
    narrow.mean_bandwidth = 1e-4;
    try {
        pooled_eigenpairs_irregular(data, part({1, 1, 1, 2, 2, 2}), narrow);
        FAIL("expected bandwidth error");
    } catch (const DegenerateError& e) {
        CHECK(std::string(e.what()).find("bandwidth too small") != std::string::npos);
    }

    SmootherConfig bad;
    bad.covariance_bandwidth = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
