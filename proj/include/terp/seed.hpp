#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace terp {

/// Counter-based seed: a master seed plus a path of stream indices
/// (family, M index, replicate, direction, ...). Draws depend only on the
/// spec, never on the order in which streams are consumed.
class SeedSpec {
public:
    SeedSpec() = default;
    explicit SeedSpec(std::uint64_t master, std::vector<std::uint64_t> path = {})
        : master_(master), path_(std::move(path)) {}

    std::uint64_t master() const { return master_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

    SeedSpec child(std::uint64_t index) const;
    SeedSpec child(std::initializer_list<std::uint64_t> indices) const;

    /// 64-bit key mixing the master seed with every path element.
    std::uint64_t key() const;
    std::mt19937_64 engine() const { return std::mt19937_64(key()); }

    bool operator==(const SeedSpec&) const = default;

private:
    std::uint64_t master_ = 0;
    std::vector<std::uint64_t> path_;
};

}  // namespace terp
