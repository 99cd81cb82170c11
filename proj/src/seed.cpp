#include "terp/seed.hpp"

namespace terp {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SeedSpec SeedSpec::child(std::uint64_t index) const {
    SeedSpec out = *this;
    out.path_.push_back(index);
    return out;
}

SeedSpec SeedSpec::child(std::initializer_list<std::uint64_t> indices) const {
    SeedSpec out = *this;
    out.path_.insert(out.path_.end(), indices.begin(), indices.end());
    return out;
}

std::uint64_t SeedSpec::key() const {
    std::uint64_t h = mix(master_);
    for (std::size_t depth = 0; depth < path_.size(); ++depth) {
        h = mix(h ^ mix(path_[depth] + 0x632be59bd9b4e019ULL * (depth + 1)));
    }
    return h;
}

}  // namespace terp
