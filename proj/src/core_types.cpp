#include "terp/core_types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>

namespace terp {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw DataError("grid needs at least two points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double t = points_[i];
        if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
            throw DataError("grid point " + std::to_string(t) + " outside [0,1]");
        }
        if (i > 0 && !(points_[i - 1] < t)) {
            throw DataError("grid points must be strictly increasing");
        }
    }
}

Grid Grid::equispaced(std::size_t count) {
    if (count < 2) {
        throw ConfigError("equi-spaced grid needs at least two points");
    }
    std::vector<double> pts(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = static_cast<double>(i) / denom;
    }
    return Grid(std::move(pts));
}

Curve::Curve(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw DataError("curve has " + std::to_string(values_.size()) + " values for " +
                        std::to_string(grid_.size()) + " grid points");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DataError("curve contains a non-finite value");
        }
    }
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Regular: return "regular";
        case Regime::Irregular: return "irregular";
        case Regime::Fragmented: return "fragmented";
    }
    return "unknown";
}

Regime regime_from_string(const std::string& name) {
    if (name == "regular") return Regime::Regular;
    if (name == "irregular") return Regime::Irregular;
    if (name == "fragmented") return Regime::Fragmented;
    throw ConfigError("unknown regime '" + name + "' (expected regular, irregular or fragmented)");
}

FunctionalDataset::FunctionalDataset(std::vector<Curve> curves, Regime regime, std::vector<std::string> ids)
    : curves_(std::move(curves)), regime_(regime), ids_(std::move(ids)) {
    if (curves_.size() < 3) {
        throw DataError("a dataset needs at least 3 curves (got " + std::to_string(curves_.size()) + ")");
    }
    if (regime_ == Regime::Regular) {
        for (const auto& c : curves_) {
            if (!(c.grid() == curves_.front().grid())) {
                throw DataError("regular dataset requires an identical grid for every curve");
            }
        }
    }
    if (ids_.empty()) {
        ids_.reserve(curves_.size());
        for (std::size_t i = 0; i < curves_.size(); ++i) {
            ids_.push_back(std::to_string(i + 1));
        }
    } else if (ids_.size() != curves_.size()) {
        throw DataError("curve id count does not match curve count");
    }
}

const Grid& FunctionalDataset::common_grid() const {
    if (regime_ != Regime::Regular) {
        throw DataError("only regular datasets have a common grid");
    }
    return curves_.front().grid();
}

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
    for (int l : labels_) {
        ++sizes[static_cast<std::size_t>(l - 1)];
    }
    return sizes;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k_));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        out[static_cast<std::size_t>(labels_[i] - 1)].push_back(i);
    }
    return out;
}

Partition partition_from_labels(std::span<const int> raw) {
    if (raw.empty()) {
        throw DataError("cannot build a partition from an empty label list");
    }
    Partition p;
    std::unordered_map<int, int> renumber;
    p.labels_.reserve(raw.size());
    for (int l : raw) {
        auto [it, inserted] = renumber.try_emplace(l, static_cast<int>(renumber.size()) + 1);
        p.labels_.push_back(it->second);
    }
    p.k_ = static_cast<int>(renumber.size());
    return p;
}

Partition partition_from_labels(std::span<const std::string> raw) {
    std::unordered_map<std::string, int> codes;
    std::vector<int> ints;
    ints.reserve(raw.size());
    for (const auto& s : raw) {
        auto [it, inserted] = codes.try_emplace(s, static_cast<int>(codes.size()));
        ints.push_back(it->second);
    }
    return partition_from_labels(std::span<const int>(ints));
}

ProjectedMatrix::ProjectedMatrix(Storage entries) : entries_(std::move(entries)) {
    if (!entries_.allFinite()) {
        throw DegenerateError("projected matrix contains non-finite entries");
    }
}

DissimilarityMatrix::DissimilarityMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw DataError("dissimilarity matrix must be square");
    }
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (entries_(i, i) != 0.0) {
            throw DataError("dissimilarity matrix must have a zero diagonal");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = entries_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw DataError("dissimilarity entries must be finite and non-negative");
            }
            if (v != entries_(j, i)) {
                throw DataError("dissimilarity matrix must be symmetric");
            }
        }
    }
}

namespace {

std::optional<long long> parse_integer(const std::string& s) {
    long long v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

bool curve_id_less(const std::string& a, const std::string& b) {
    const auto ia = parse_integer(a);
    const auto ib = parse_integer(b);
    if (ia && ib) {
        return *ia < *ib;
    }
    if (ia != std::nullopt) return true;  // numeric ids sort before names
    if (ib != std::nullopt) return false;
    return a < b;
}

FunctionalDataset build_dataset(std::span<const Record> records, bool fragmented) {
    std::map<std::string, std::vector<std::pair<double, double>>, decltype(&curve_id_less)> grouped(&curve_id_less);
    for (const auto& r : records) {
        if (!std::isfinite(r.time) || r.time < 0.0 || r.time > 1.0) {
            throw DataError("curve '" + r.curve_id + "': time " + std::to_string(r.time) + " outside [0,1]");
        }
        if (!std::isfinite(r.value)) {
            throw DataError("curve '" + r.curve_id + "': non-finite value at time " + std::to_string(r.time));
        }
        grouped[r.curve_id].emplace_back(r.time, r.value);
    }
    if (grouped.size() < 3) {
        throw DataError("a dataset needs at least 3 curves (got " + std::to_string(grouped.size()) + ")");
    }

    std::vector<Curve> curves;
    std::vector<std::string> ids;
    curves.reserve(grouped.size());
    for (auto& [id, obs] : grouped) {
        std::sort(obs.begin(), obs.end());
        std::vector<double> times;
        std::vector<double> values;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (i > 0 && obs[i].first == obs[i - 1].first) {
                throw DataError("curve '" + id + "': duplicate time " + std::to_string(obs[i].first));
            }
            times.push_back(obs[i].first);
            values.push_back(obs[i].second);
        }
        if (times.size() < 2) {
            throw DataError("curve '" + id + "' needs at least 2 distinct times");
        }
        curves.emplace_back(Grid(std::move(times)), std::move(values));
        ids.push_back(id);
    }

    Regime regime = Regime::Regular;
    if (fragmented) {
        regime = Regime::Fragmented;
    } else {
        for (const auto& c : curves) {
            if (!(c.grid() == curves.front().grid())) {
                regime = Regime::Irregular;
                break;
            }
        }
    }
    return FunctionalDataset(std::move(curves), regime, std::move(ids));
}

}  // namespace terp
