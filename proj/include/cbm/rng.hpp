// Portable seeded random streams.
//
// Streams are std::mt19937_64 engines (bit-identical across standard
// libraries) seeded through SplitMix64 from (seed, stream id, substream id).
// Replication r of an experiment with seed s uses stream(s, r); nested
// consumers (e.g. the heuristic sampler inside a simulated stage) take a
// substream. Uniform doubles are built from the top 53 bits directly rather
// than through <random> distributions, whose output is implementation-defined.
#pragma once

#include <cstdint>
#include <random>

namespace cbm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64(s);
        s = mixed ^ (stream * 0xD1B54A32D192ED03ULL);
        mixed = splitmix64(s);
        s = mixed ^ (substream * 0x8CB92BA72F3D8DD7ULL);
        engine_.seed(splitmix64(s));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        // rejection keeps the draw unbiased
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Index drawn from a discrete distribution given by `probs` (size n).
    template <class It>
    int categorical(It first, int n) {
        const double u = uniform();
        double acc = 0.0;
        int last_positive = 0;
        for (int k = 0; k < n; ++k) {
            const double p = first[k];
            if (p > 0.0) last_positive = k;
            acc += p;
            if (u < acc) return k;
        }
        return last_positive;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace cbm
