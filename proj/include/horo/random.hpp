#pragma once

#include <cstdint>

#include "horo/psl2.hpp"

namespace horo
{

// Seeded stream with a fixed, platform-independent mapping to doubles.
class SplitMix64
{
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

// Seed for stream `index` derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 s(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return s.next();
}

// exp of a Lie vector with components uniform in [-scale, scale].
inline GroupElement random_group_element(SplitMix64& rng, double scale)
{
    return exp_psl2({rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                     rng.uniform(-scale, scale)});
}

} // namespace horo
