#ifndef CLUSTERFORGE_RNG_HPP
#define CLUSTERFORGE_RNG_HPP

#include <cstdint>

namespace clusterforge {

// splitmix64; counter-based use (hash of seed/stream/counter) keeps results
// independent of thread count and evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform double in [0,1) from 64 random bits.
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() { return splitmix64(state++); }
    double next_u01() { return u01(next()); }
    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }
};

} // namespace clusterforge

#endif
