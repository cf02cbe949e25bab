#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mtdp {

// Deterministic random source. std::mt19937_64 is fully specified by the
// standard, but the std distribution adaptors are not, so the few draws we
// need are derived from raw 64-bit words here. Same seed, same stream, on
// every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be > 0.
    size_t below(size_t n) { return static_cast<size_t>(gen_() % static_cast<uint64_t>(n)); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// Mixes a base seed with one or more stream indices so that e.g. per-epoch
// generators are decorrelated but reproducible (splitmix64 finalizer).
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace mtdp
