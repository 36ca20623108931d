#include "perron/stats.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace perron {

namespace {

// Draws one positive-side digit row of `depth` digits whose rank-depth
// cylinder is wider than the sampling lattice by the 2^8 safety margin;
// doubles the bit budget on failure. Returns the attempts consumed and the
// bit budget that finally succeeded.
DigitSeq sample_row(const PhiProgram& program, std::size_t depth, unsigned base_bits,
                    const DyadicSampler& base_sampler, std::uint64_t sample, unsigned max_doublings,
                    std::uint64_t seed, std::uint64_t* attempts_out, unsigned* bits_out) {
    std::uint32_t attempt = 0;
    for (unsigned doubling = 0; doubling <= max_doublings; ++doubling) {
        const unsigned bits = base_bits << doubling;
        const DyadicSampler sampler = doubling == 0 ? base_sampler : DyadicSampler(seed, bits);
        const Rational x = sampler.draw(sample, &attempt);

        ExtractLimits limits;
        limits.max_depth = depth;
        limits.max_digit_bits = std::max<std::size_t>(128, 2 * static_cast<std::size_t>(bits));
        DigitSeq row = extract_p(x, program, limits);

        // Lattice-resolution guard: the rank-n cylinder must be at least
        // 2^-(bits-8) wide, or the digits could be artifacts of truncation.
        const Interval enclosure = reconstruct_enclosure(program, Side::Positive, row.digits);
        if (enclosure.width() >= Rational::pow2_inverse(bits - 8)) {
            *attempts_out = attempt;
            *bits_out = bits;
            return row;
        }
        ++attempt;
    }
    throw precision_exhausted_error("rank-" + std::to_string(depth) +
                                    " cylinder narrower than the sampling lattice after " +
                                    std::to_string(max_doublings) + " bit doublings");
}

Quantiles quantiles_of(std::vector<long double> values) {
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        if (values.size() == 1) return values[0];
        const double idx = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const long double frac = static_cast<long double>(idx - static_cast<double>(lo));
        return values[lo] * (1 - frac) + values[hi] * frac;
    };
    Quantiles q;
    q.min = values.front();
    q.q25 = at(0.25);
    q.median = at(0.5);
    q.q75 = at(0.75);
    q.max = values.back();
    return q;
}

} // namespace

RenyiSummary renyi_profile(const PhiProgram& program, Side side, std::size_t depth,
                           std::uint64_t samples, unsigned bits, std::uint64_t seed,
                           const RowOptions& options) {
    if (depth < 1) throw validation_error("row depth must be >= 1");
    if (samples == 0) throw validation_error("sample count must be >= 1");
    if (bits < 32) throw validation_error("sampling needs at least 32 bits");

    RenyiSummary summary;
    summary.side = side;
    summary.depth = depth;
    summary.samples = samples;
    summary.bits = bits;
    summary.seed = seed;
    summary.rows.resize(samples);

    const DyadicSampler sampler(seed, bits);
    const long double n = static_cast<long double>(depth);
    const long double sqrt_n = std::sqrt(n);

    std::vector<unsigned> bits_used(samples, bits);
    auto run_chunk = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint64_t attempts = 0;
            unsigned used = bits;
            DigitSeq row = sample_row(program, depth, bits, sampler, i, options.max_doublings,
                                      seed, &attempts, &used);
            StatRow& out = summary.rows[i];
            out.sample = i;
            out.seed_offset = attempts;
            out.p_n = row.digits.back();
            out.log_p_n = log_approx(out.p_n);
            out.score = (out.log_p_n - n) / sqrt_n;
            out.growth = out.log_p_n / n;
            out.gap = row.digits.back() - row.r_values.back();
            bits_used[i] = used;
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || samples < 2 * threads) {
        run_chunk(0, samples);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (samples + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min<std::uint64_t>(t * chunk, samples);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, samples);
            if (begin < end) pool.emplace_back(run_chunk, begin, end);
        }
        for (auto& worker : pool) worker.join();
    }

    std::vector<long double> scores;
    scores.reserve(samples);
    long double score_sum = 0, growth_sum = 0;
    std::uint64_t resamples = 0;
    unsigned max_bits = bits;
    for (const StatRow& row : summary.rows) {
        scores.push_back(row.score);
        score_sum += row.score;
        growth_sum += row.growth;
        resamples += row.seed_offset;
    }
    for (unsigned used : bits_used) max_bits = std::max(max_bits, used);
    summary.resamples = resamples;
    summary.max_bits_used = max_bits;
    summary.mean_score = score_sum / static_cast<long double>(samples);
    summary.mean_growth = growth_sum / static_cast<long double>(samples);
    if (samples > 1) {
        long double ss = 0;
        for (long double s : scores) ss += (s - summary.mean_score) * (s - summary.mean_score);
        summary.sd_score = std::sqrt(ss / static_cast<long double>(samples - 1));
    }
    summary.score_quantiles = quantiles_of(scores);

    if (depth >= 3) {
        const long double lil_scale = std::sqrt(2 * n * std::log(std::log(n)));
        std::vector<long double> lil_values;
        lil_values.reserve(samples);
        for (const StatRow& row : summary.rows)
            lil_values.push_back((row.log_p_n - n) / lil_scale);
        summary.lil = quantiles_of(lil_values);
    }
    return summary;
}

std::vector<long double> growth_exponent(const DigitSeq& row) {
    std::vector<long double> out;
    out.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i)
        out.push_back(log_approx(row.digits[i]) / static_cast<long double>(i + 1));
    return out;
}

FrequencyReport digit_frequency(const PhiProgram& program, Side side,
                                std::vector<std::size_t> positions, std::uint64_t samples,
                                unsigned bits, std::uint64_t seed, const BigInt& max_digit,
                                const RowOptions& options) {
    if (positions.empty()) throw validation_error("at least one position is required");
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    if (positions.front() < 1) throw validation_error("positions are 1-based");
    if (positions.back() > 64) throw validation_error("positions are limited to 64");
    if (max_digit < 2) throw validation_error("max digit must be >= 2");
    if (max_digit > 4096) throw validation_error("frequency tables are limited to max digit 4096");
    if (samples == 0) throw validation_error("sample count must be >= 1");
    if (bits < 32) throw validation_error("sampling needs at least 32 bits");

    FrequencyReport report;
    report.side = side;
    report.positions = positions;
    report.samples = samples;
    report.bits = bits;
    report.seed = seed;
    report.max_digit = max_digit;

    const std::size_t deepest = positions.back();
    const std::size_t digit_span = mpz_get_ui(BigInt(max_digit - 1).get_mpz_t()); // digits 2..max
    const DyadicSampler sampler(seed, bits);

    struct Tally {
        std::vector<std::uint64_t> counts; // positions.size() x digit_span
        std::vector<std::uint64_t> other;
        std::uint64_t resamples = 0;
        unsigned max_bits = 0;
    };

    auto run_chunk = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        tally.counts.assign(positions.size() * digit_span, 0);
        tally.other.assign(positions.size(), 0);
        tally.max_bits = bits;
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint64_t attempts = 0;
            unsigned used = bits;
            DigitSeq row = sample_row(program, deepest, bits, sampler, i, options.max_doublings,
                                      seed, &attempts, &used);
            tally.resamples += attempts;
            tally.max_bits = std::max(tally.max_bits, used);
            for (std::size_t p = 0; p < positions.size(); ++p) {
                const BigInt& digit = row.digits[positions[p] - 1];
                if (digit <= max_digit) {
                    const std::size_t j = mpz_get_ui(BigInt(digit - 2).get_mpz_t());
                    ++tally.counts[p * digit_span + j];
                } else {
                    ++tally.other[p];
                }
            }
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    std::vector<Tally> tallies(threads);
    if (threads == 1 || samples < 2 * threads) {
        run_chunk(0, samples, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (samples + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min<std::uint64_t>(t * chunk, samples);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, samples);
            if (begin < end) pool.emplace_back(run_chunk, begin, end, std::ref(tallies[t]));
        }
        for (auto& worker : pool) worker.join();
    }

    std::vector<std::uint64_t> counts(positions.size() * digit_span, 0);
    report.other_counts.assign(positions.size(), 0);
    report.max_bits_used = bits;
    for (const Tally& tally : tallies) {
        if (tally.counts.empty()) continue;
        for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += tally.counts[j];
        for (std::size_t p = 0; p < positions.size(); ++p) report.other_counts[p] += tally.other[p];
        report.resamples += tally.resamples;
        report.max_bits_used = std::max(report.max_bits_used, tally.max_bits);
    }

    // Exact per-position law for constant phi rules with phi_0 equal to the
    // constant: digit c occurs with mass phi_0 / ((c-1) c) at every position.
    const auto& constant = program.constant_rule();
    report.exact_available = constant.has_value() && *constant == program.phi0();
    if (report.exact_available)
        report.tail_exact = Rational(program.phi0(), max_digit);

    for (std::size_t p = 0; p < positions.size(); ++p) {
        for (std::size_t j = 0; j < digit_span; ++j) {
            FrequencyCell cell;
            cell.position = positions[p];
            cell.digit = BigInt(static_cast<unsigned long>(j + 2));
            cell.count = counts[p * digit_span + j];
            cell.empirical = Rational(BigInt(static_cast<unsigned long>(cell.count)),
                                      BigInt(static_cast<unsigned long>(samples)));
            if (report.exact_available) {
                cell.exact = cell.digit <= program.phi0()
                                 ? Rational(0)
                                 : Rational(program.phi0(), (cell.digit - 1) * cell.digit);
                cell.deviation = std::abs((cell.empirical - *cell.exact).to_double());
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

} // namespace perron
