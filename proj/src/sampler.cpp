#include "perron/sampler.hpp"

namespace perron {

std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

// sample:40 | attempt:12 | word:12
constexpr std::uint64_t kAttemptShift = 12;
constexpr std::uint64_t kSampleShift = 24;

} // namespace

BigInt DyadicSampler::draw_numerator(std::uint64_t sample, std::uint32_t attempt) const {
    const unsigned words = (bits_ + 63) / 64;
    BigInt m = 0;
    for (unsigned w = 0; w < words; ++w) {
        const std::uint64_t counter =
            (sample << kSampleShift) | (static_cast<std::uint64_t>(attempt) << kAttemptShift) | w;
        const std::uint64_t word = mix64(seed_, counter);
        BigInt chunk(static_cast<unsigned long>(word));
        mpz_mul_2exp(chunk.get_mpz_t(), chunk.get_mpz_t(), 64 * w);
        m += chunk;
    }
    // Trim to exactly `bits_` bits.
    BigInt mask = 1;
    mpz_mul_2exp(mask.get_mpz_t(), mask.get_mpz_t(), bits_);
    mask -= 1;
    m &= mask;
    return m;
}

Rational DyadicSampler::draw(std::uint64_t sample, std::uint32_t* attempt) const {
    for (;;) {
        BigInt m = draw_numerator(sample, *attempt);
        if (m != 0) return Rational::dyadic(m, bits_);
        ++*attempt; // all-zero word block; vanishing probability for bits >= 32
    }
}

} // namespace perron
