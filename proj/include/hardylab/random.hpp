#pragma once

#include <cstdint>
#include <random>

namespace hardylab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seeded generator with derived independent streams, so sweeps and samplers
// stay deterministic under any evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    Rng split(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ (0x517cc1b727220a95ull * (stream + 1))));
    }

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }
    double normal() { return std::normal_distribution<double>()(engine_); }
    std::uint64_t integer() { return engine_(); }
    std::mt19937_64& engine() { return engine_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace hardylab
