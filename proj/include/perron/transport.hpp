#ifndef PERRON_TRANSPORT_HPP
#define PERRON_TRANSPORT_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "perron/cylinder.hpp"
#include "perron/expansion.hpp"
#include "perron/sampler.hpp"

namespace perron {

/// Image of x under the digit-preserving transport map: the positive-side
/// digit prefix of x, read as the base of an alternating-side cylinder
/// enclosing the transported point.
struct TransportResult {
    Rational input;
    std::vector<BigInt> digits;
    Interval image_enclosure;
    std::size_t depth = 0;
};

/// Extracts `depth` positive-side digits of x in (0,1] and returns the
/// alternating-side enclosure with the same digit prefix (width <= 2^-depth).
TransportResult transport_point(const PhiProgram& program, const Rational& x, std::size_t depth);

/// The (positive, alternating) cylinder pair over the same base; the two
/// lengths are exactly equal.
std::pair<CylinderBox, CylinderBox> transport_cylinder(const PhiProgram& program,
                                                       std::span<const BigInt> base);

/// Exact cover value of the digit-restricted set at a finite depth: the sum
/// of lengths of all rank-`depth` cylinders whose digits all lie in the
/// allowed set. Identical on both sides (equal cylinder lengths).
struct CoverMeasure {
    Side side = Side::Alternating;
    std::vector<BigInt> allowed;
    std::size_t depth = 0;
    Rational value;
    std::uint64_t cylinder_count = 0;
};

struct CoverOptions {
    std::uint64_t max_cylinders = 1u << 22; // enumeration guard
};

CoverMeasure cover_measure_restricted(const PhiProgram& program, Side side,
                                      std::vector<BigInt> allowed, std::size_t depth,
                                      const CoverOptions& options = {});

/// Empirical digit law at one position versus the exact cylinder-length
/// marginal. Frequencies are exact rationals count/N and sum to 1 together
/// with the `other` bucket.
struct DigitLawEntry {
    BigInt digit;
    std::uint64_t count = 0;
    Rational empirical;
    Rational exact;
    double deviation = 0.0;    // |empirical - exact|
    double sigma4 = 0.0;       // 4 sqrt(exact (1-exact) / N)
    bool flagged = false;      // deviation > sigma4 (reported, not fatal)
};

struct DigitLawReport {
    Side side = Side::Alternating;
    std::size_t position = 1;
    std::uint64_t samples = 0;
    unsigned bits = 64;
    std::uint64_t seed = 0;
    BigInt max_digit;                 // largest tracked digit value
    std::vector<DigitLawEntry> entries;
    std::uint64_t other_count = 0;    // samples whose digit fell outside the tracked range
    Rational other_empirical;
    Rational tail_exact;              // exact mass not covered by tracked entries
    double max_abs_deviation = 0.0;
    std::uint64_t resamples = 0;      // boundary hits and zero draws
    std::uint64_t transport_checks = 0;
};

struct McOptions {
    BigInt max_digit = 16;   // law table truncation
    unsigned threads = 1;
};

/// Draws N uniform dyadic samples (resampling boundary outcomes), extracts
/// the digit at `position` on the requested side, and compares frequencies
/// against the exact law. Every sample also re-derives its positive-side
/// prefix through transport_point and asserts digit preservation.
DigitLawReport mc_digit_law(const PhiProgram& program, Side side, std::size_t position,
                            std::uint64_t samples, unsigned bits, std::uint64_t seed,
                            const McOptions& options = {});

/// Semi-decidable boundary-set membership: probes extraction to a depth and
/// returns the exact witness when x hits a cylinder endpoint.
struct BoundaryInfo {
    std::optional<BoundaryWitness> witness;
    std::size_t probed_depth = 0;

    bool detected() const noexcept { return witness.has_value(); }
};

BoundaryInfo is_membership(const PhiProgram& program, const Rational& x, std::size_t probe_depth = 64);

} // namespace perron

#endif
