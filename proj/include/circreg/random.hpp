#pragma once

#include <cstdint>
#include <random>

namespace circreg {

/// SplitMix64 finalizer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic uniform stream. Doubles are built from the top 53 bits of
/// mt19937_64 so results do not depend on the standard library's distributions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Substream `index` of `master`: depends only on (master, index), so
    /// replicate r draws the same numbers whatever order replicates run in.
    static RandomStream substream(std::uint64_t master, std::uint64_t index) {
        return RandomStream(splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace circreg
