#pragma once

#include <cstdint>

namespace hetnet {

// SplitMix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: the state is a pure function of (seed, a, b), so the
// draws for a given sample never depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : key_(mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL))) {}

    std::uint64_t next() { return mix64(key_ + 0x632be59bd9b4e019ULL * ++ctr_); }
    // Uniform on (0, 1).
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace hetnet
