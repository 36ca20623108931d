#ifndef PERRON_SAMPLER_HPP
#define PERRON_SAMPLER_HPP

#include <cstdint>

#include "perron/rational.hpp"

namespace perron {

/// SplitMix64 finalizer applied to seed + counter * golden gamma: a
/// stateless, splittable word function. Disjoint counter ranges give
/// independent substreams, so samples can be generated in any order or in
/// parallel with identical results.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter);

/// Uniform dyadic rationals m / 2^bits drawn from per-sample substreams.
/// Counter layout: sample index (high), attempt, word — each (sample,
/// attempt) pair yields one independent draw, so rejected draws (boundary
/// hits, resolution retries) never disturb other samples.
class DyadicSampler {
public:
    DyadicSampler(std::uint64_t seed, unsigned bits) : seed_(seed), bits_(bits) {}

    unsigned bits() const noexcept { return bits_; }

    /// The raw numerator m in [0, 2^bits); callers reject m == 0.
    BigInt draw_numerator(std::uint64_t sample, std::uint32_t attempt) const;

    /// m / 2^bits with m in [1, 2^bits); bumps *attempt past zero draws.
    Rational draw(std::uint64_t sample, std::uint32_t* attempt) const;

private:
    std::uint64_t seed_;
    unsigned bits_;
};

} // namespace perron

#endif
