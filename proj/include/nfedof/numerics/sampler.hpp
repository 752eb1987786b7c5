#pragma once

#include <cstdint>

namespace nfedof {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// Counter-based generator: draw i depends only on (seed, stream, i).
class SeededSampler {
public:
    SeededSampler(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), key_(hash_combine(seed, stream)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t bits(std::uint64_t index) const { return splitmix64(key_ ^ splitmix64(index)); }

    // uniform in [0, 1), 53-bit resolution
    double uniform(std::uint64_t index) const { return (bits(index) >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi, std::uint64_t index) const { return lo + (hi - lo) * uniform(index); }

    // sequential interface on top of the counter
    double next() { return uniform(counter_++); }
    double next(double lo, double hi) { return uniform(lo, hi, counter_++); }
    void reset() { counter_ = 0; }

    SeededSampler substream(std::uint64_t id) const { return SeededSampler(seed_, hash_combine(stream_, id)); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace nfedof
