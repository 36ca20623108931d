#include "perron/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace perron {

TransportResult transport_point(const PhiProgram& program, const Rational& x, std::size_t depth) {
    if (depth == 0) throw validation_error("transport depth must be >= 1");
    ExtractLimits limits;
    limits.max_depth = depth;
    limits.max_digit_bits = std::max<std::size_t>(128, 2 * bit_length(x.den()));
    DigitSeq seq = extract_p(x, program, limits);
    TransportResult result;
    result.input = x;
    result.digits = seq.digits;
    result.image_enclosure = reconstruct_enclosure(program, Side::Alternating, seq.digits);
    result.depth = seq.digits.size();
    return result;
}

std::pair<CylinderBox, CylinderBox> transport_cylinder(const PhiProgram& program,
                                                       std::span<const BigInt> base) {
    CylinderBox positive = cyl_bounds_p(program, base);
    CylinderBox alternating = cyl_bounds_pminus(program, base);
    if (positive.length != alternating.length)
        throw error("transport length identity violated"); // unreachable: shared length formula
    return {std::move(positive), std::move(alternating)};
}

CoverMeasure cover_measure_restricted(const PhiProgram& program, Side side,
                                      std::vector<BigInt> allowed, std::size_t depth,
                                      const CoverOptions& options) {
    if (depth == 0) throw validation_error("cover depth must be >= 1");
    std::sort(allowed.begin(), allowed.end());
    allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());

    CoverMeasure cover;
    cover.side = side;
    cover.allowed = allowed;
    cover.depth = depth;

    std::vector<BigInt> prefix;
    prefix.reserve(depth);
    BigInt r_product = 1;
    BigInt digit_product = 1;

    std::function<void(std::size_t)> walk = [&](std::size_t level) {
        const BigInt r = eval_phi(program, level, prefix);
        if (level == depth) {
            cover.value += Rational(r_product, digit_product);
            if (++cover.cylinder_count > options.max_cylinders)
                throw depth_error("restricted cover enumerates more than " +
                                  std::to_string(options.max_cylinders) + " cylinders");
            return;
        }
        for (const BigInt& digit : allowed) {
            if (digit < r + 1) continue;
            const BigInt saved_r = r_product;
            const BigInt saved_d = digit_product;
            r_product *= r;
            digit_product *= (digit - 1) * digit;
            prefix.push_back(digit);
            walk(level + 1);
            prefix.pop_back();
            r_product = saved_r;
            digit_product = saved_d;
        }
    };
    walk(0);

    if (cover.cylinder_count == 0)
        throw empty_restriction_error("no rank-" + std::to_string(depth) +
                                      " cylinder has all digits in the allowed set");
    return cover;
}

namespace {

// Exact digit-law marginal at `position`, truncating every digit range at
// max_digit. Returns mass per digit in [first feasible, max_digit]; the
// remaining mass (deeper digits and truncated prefixes) is the tail.
struct ExactLaw {
    BigInt min_digit;
    std::vector<Rational> mass; // indexed by digit - min_digit
    Rational tracked_total;
};

ExactLaw exact_digit_law(const PhiProgram& program, std::size_t position, const BigInt& max_digit) {
    ExactLaw law;
    law.min_digit = 2; // no digit can be smaller: r >= 1 everywhere
    if (max_digit < law.min_digit)
        throw validation_error("max digit must be >= 2, got " + max_digit.get_str());
    if (max_digit > 4096)
        throw validation_error("law tables are limited to max digit 4096");
    const std::size_t span = mpz_get_ui(BigInt(max_digit - law.min_digit + 1).get_mpz_t());
    double base_count = 1.0;
    for (std::size_t i = 1; i < position; ++i) base_count *= static_cast<double>(span);
    if (base_count > (1u << 20))
        throw validation_error("exact law enumeration too large; lower the position or max digit");
    law.mass.assign(span, Rational(0));

    std::vector<BigInt> prefix;
    BigInt r_product = 1;
    BigInt digit_product = 1;

    std::function<void(std::size_t)> walk = [&](std::size_t level) {
        const BigInt r = eval_phi(program, level, prefix);
        if (level + 1 == position) {
            for (BigInt digit = r + 1; digit <= max_digit; ++digit) {
                const Rational len(r_product * r, digit_product * (digit - 1) * digit);
                if (digit >= law.min_digit)
                    law.mass[mpz_get_ui(BigInt(digit - law.min_digit).get_mpz_t())] += len;
            }
            return;
        }
        for (BigInt digit = r + 1; digit <= max_digit; ++digit) {
            const BigInt saved_r = r_product;
            const BigInt saved_d = digit_product;
            r_product *= r;
            digit_product *= (digit - 1) * digit;
            prefix.push_back(digit);
            walk(level + 1);
            prefix.pop_back();
            r_product = saved_r;
            digit_product = saved_d;
        }
    };
    walk(0);

    for (const Rational& m : law.mass) law.tracked_total += m;
    return law;
}

} // namespace

DigitLawReport mc_digit_law(const PhiProgram& program, Side side, std::size_t position,
                            std::uint64_t samples, unsigned bits, std::uint64_t seed,
                            const McOptions& options) {
    if (position == 0) throw validation_error("digit position must be >= 1");
    if (samples == 0) throw validation_error("sample count must be >= 1");
    if (bits < 32) throw validation_error("sampling needs at least 32 bits");

    DigitLawReport report;
    report.side = side;
    report.position = position;
    report.samples = samples;
    report.bits = bits;
    report.seed = seed;
    report.max_digit = options.max_digit;

    const ExactLaw law = exact_digit_law(program, position, options.max_digit);
    const DyadicSampler sampler(seed, bits);

    ExtractLimits limits;
    limits.max_depth = position;
    limits.max_digit_bits = std::max<std::size_t>(128, 2 * static_cast<std::size_t>(bits));

    struct Tally {
        std::vector<std::uint64_t> counts;
        std::uint64_t other = 0;
        std::uint64_t resamples = 0;
        std::uint64_t transport_checks = 0;
    };

    auto run_chunk = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        tally.counts.assign(law.mass.size(), 0);
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint32_t attempt = 0;
            for (;;) {
                const Rational x = sampler.draw(i, &attempt);
                // Digit preservation under transport is asserted on every
                // sample, whatever side the law is being measured on.
                const DigitSeq pos_seq = extract_p(x, program, limits);
                const TransportResult transported = transport_point(program, x, position);
                if (transported.digits != pos_seq.digits)
                    throw error("transport failed to preserve a digit prefix");
                ++tally.transport_checks;

                BigInt digit;
                if (side == Side::Positive) {
                    digit = pos_seq.digits[position - 1];
                } else {
                    const DigitOutcome outcome = extract_pminus(x, program, limits);
                    if (!outcome.ongoing() && outcome.seq.size() < position) {
                        ++tally.resamples;
                        ++attempt;
                        continue;
                    }
                    digit = outcome.seq.digits[position - 1];
                }
                if (digit <= options.max_digit) {
                    ++tally.counts[mpz_get_ui(BigInt(digit - law.min_digit).get_mpz_t())];
                } else {
                    ++tally.other;
                }
                break;
            }
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    std::vector<Tally> tallies(threads);
    if (threads == 1) {
        run_chunk(0, samples, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (samples + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = std::min<std::uint64_t>(t * chunk, samples);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, samples);
            pool.emplace_back(run_chunk, begin, end, std::ref(tallies[t]));
        }
        for (auto& worker : pool) worker.join();
    }

    std::vector<std::uint64_t> counts(law.mass.size(), 0);
    for (const Tally& tally : tallies) {
        if (tally.counts.empty()) continue;
        for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += tally.counts[j];
        report.other_count += tally.other;
        report.resamples += tally.resamples;
        report.transport_checks += tally.transport_checks;
    }

    for (std::size_t j = 0; j < counts.size(); ++j) {
        DigitLawEntry entry;
        entry.digit = law.min_digit + BigInt(static_cast<unsigned long>(j));
        entry.count = counts[j];
        entry.empirical = Rational(BigInt(static_cast<unsigned long>(counts[j])),
                                   BigInt(static_cast<unsigned long>(samples)));
        entry.exact = law.mass[j];
        entry.deviation = std::abs((entry.empirical - entry.exact).to_double());
        const double p = entry.exact.to_double();
        entry.sigma4 = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
        entry.flagged = entry.deviation > entry.sigma4;
        report.max_abs_deviation = std::max(report.max_abs_deviation, entry.deviation);
        report.entries.push_back(std::move(entry));
    }
    report.other_empirical = Rational(BigInt(static_cast<unsigned long>(report.other_count)),
                                      BigInt(static_cast<unsigned long>(samples)));
    report.tail_exact = Rational(1) - law.tracked_total;
    return report;
}

BoundaryInfo is_membership(const PhiProgram& program, const Rational& x, std::size_t probe_depth) {
    ExtractLimits limits;
    limits.max_depth = probe_depth;
    limits.max_digit_bits = std::max<std::size_t>(256, 4 * bit_length(x.den()));
    BoundaryInfo info;
    try {
        DigitOutcome outcome = extract_pminus(x, program, limits);
        info.witness = std::move(outcome.boundary);
        info.probed_depth = probe_depth;
    } catch (const depth_error&) {
        // Digit growth outran the guard before any endpoint was hit;
        // membership stays undetected at this probe depth.
        info.probed_depth = probe_depth;
    }
    return info;
}

} // namespace perron
