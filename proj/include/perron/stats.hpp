#ifndef PERRON_STATS_HPP
#define PERRON_STATS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "perron/expansion.hpp"
#include "perron/sampler.hpp"

namespace perron {

/// One sampled digit row, reduced to the depth-n digit and its derived
/// columns. Logs are natural logs in long double (64-bit significand).
struct StatRow {
    std::uint64_t sample = 0;
    std::uint64_t seed_offset = 0; // attempts consumed before acceptance
    BigInt p_n;
    long double log_p_n = 0;
    long double score = 0;  // (log p_n - n) / sqrt(n)
    long double growth = 0; // (1/n) log p_n
    BigInt gap;             // p_n - r_{n-1}
};

struct Quantiles {
    long double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

struct RenyiSummary {
    Side side = Side::Positive;
    std::size_t depth = 0;
    std::uint64_t samples = 0;
    unsigned bits = 0;
    std::uint64_t seed = 0;
    long double mean_score = 0;
    long double sd_score = 0; // sample sd; 0 by convention for a single row
    Quantiles score_quantiles;
    long double mean_growth = 0;
    // Descriptive law-of-the-iterated-logarithm range (log p_n - n) /
    // sqrt(2 n log log n), reported only for n >= 3 and never gated on.
    std::optional<Quantiles> lil;
    std::uint64_t resamples = 0;
    unsigned max_bits_used = 0;
    std::vector<StatRow> rows;
};

/// Sampling knobs shared by the row-based experiments. Digit rows on the
/// alternating side are read through the digit-preserving transport of
/// positive-side rows; the transport preserves Lebesgue measure, so the
/// row statistics coincide with direct alternating sampling while keeping
/// rows comparable digit-for-digit across sides under a shared seed.
struct RowOptions {
    unsigned threads = 1;
    unsigned max_doublings = 5; // resolution retries before PrecisionExhausted
};

/// Distribution summary of (log p_n - n)/sqrt(n) and (1/n) log p_n over N
/// uniform samples. Every accepted sample's rank-n cylinder is checked to
/// be wider than the sampling lattice (2^-(B-8)); too-narrow draws are
/// resampled with doubled B.
RenyiSummary renyi_profile(const PhiProgram& program, Side side, std::size_t depth,
                           std::uint64_t samples, unsigned bits, std::uint64_t seed,
                           const RowOptions& options = {});

/// (1/n) log p_n for n = 1..k over one digit row.
std::vector<long double> growth_exponent(const DigitSeq& row);

/// Khintchine-style frequency table: occurrences of each tracked digit at
/// each requested position. The exact column is available when phi is the
/// constant phi_0 (the per-position law is then position-independent:
/// digit c occurs with probability phi_0 / ((c-1) c)).
struct FrequencyCell {
    std::size_t position = 0;
    BigInt digit;
    std::uint64_t count = 0;
    Rational empirical;
    std::optional<Rational> exact;
    std::optional<double> deviation;
};

struct FrequencyReport {
    Side side = Side::Positive;
    std::vector<std::size_t> positions;
    std::uint64_t samples = 0;
    unsigned bits = 0;
    std::uint64_t seed = 0;
    BigInt max_digit;
    bool exact_available = false;
    Rational tail_exact; // per-position mass above max_digit (constant-phi only)
    std::vector<FrequencyCell> cells;
    std::vector<std::uint64_t> other_counts; // per position, digits > max_digit
    std::uint64_t resamples = 0;
    unsigned max_bits_used = 0;
};

FrequencyReport digit_frequency(const PhiProgram& program, Side side,
                                std::vector<std::size_t> positions, std::uint64_t samples,
                                unsigned bits, std::uint64_t seed, const BigInt& max_digit,
                                const RowOptions& options = {});

} // namespace perron

#endif
