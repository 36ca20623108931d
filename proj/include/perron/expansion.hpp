#ifndef PERRON_EXPANSION_HPP
#define PERRON_EXPANSION_HPP

#include <optional>
#include <span>
#include <vector>

#include "perron/phi.hpp"
#include "perron/rational.hpp"

namespace perron {

/// Validated digit prefix q_1..q_k (or p_1..p_k) together with the cached
/// r-chain r_0..r_{k-1} that constrained it (digits[i] >= r_values[i] + 1).
struct DigitSeq {
    Side side = Side::Alternating;
    PhiProgram program;
    std::vector<BigInt> digits;
    std::vector<BigInt> r_values;

    std::size_t size() const noexcept { return digits.size(); }
};

enum class BoundaryKind { Inf, Sup };

/// Exact witness that x is the inf or sup of a cylinder: the endpoint of
/// the rank-`rank` cylinder with base `base` equals x.
struct BoundaryWitness {
    std::size_t rank = 0;
    std::vector<BigInt> base;
    BoundaryKind kind = BoundaryKind::Sup;
    Rational endpoint;
};

/// Result of alternating-side extraction. `seq` holds the digits of the
/// cylinders that strictly contain x; `boundary`, when present, certifies
/// that extraction stopped because x is a cylinder endpoint.
struct DigitOutcome {
    DigitSeq seq;
    std::optional<BoundaryWitness> boundary;

    bool ongoing() const noexcept { return !boundary.has_value(); }
};

/// Exact rational enclosure with endpoint openness flags.
struct Interval {
    Rational lo;
    Rational hi;
    bool lo_open = true;
    bool hi_open = true;

    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const {
        if (lo_open ? !(lo < x) : !(lo <= x)) return false;
        return hi_open ? x < hi : x <= hi;
    }
};

/// Guards for the extraction loops. `max_digit_bits` aborts runaway digit
/// growth (custom phi programs can force super-exponential digits);
/// `target_width` stops as soon as the rank-k cylinder is at least that
/// tight, which is how experiments bound work on fast-shrinking families.
struct ExtractLimits {
    std::size_t max_depth = 32;
    std::size_t max_digit_bits = 64;
    std::optional<Rational> target_width;
};

/// Alternating-side digits of x in (0,1). Stops at max_depth, at
/// target_width, or with a Boundary witness when x turns out to be a
/// cylinder endpoint. All arithmetic exact.
DigitOutcome extract_pminus(const Rational& x, const PhiProgram& program, const ExtractLimits& limits);

/// Positive-side digits of x in (0,1] under the half-open cylinder
/// convention (lo excluded, hi included). Never terminates on its own:
/// endpoint values continue with minimal digits.
DigitSeq extract_p(const Rational& x, const PhiProgram& program, const ExtractLimits& limits);

/// Sum of the first k alternating terms; equals the sup of the rank-k
/// cylinder for odd k and the inf for even k.
Rational partial_sum_pminus(const PhiProgram& program, std::span<const BigInt> digits);

/// Sum of the first k positive terms; equals the excluded lower endpoint
/// of the rank-k positive cylinder.
Rational partial_sum_p(const PhiProgram& program, std::span<const BigInt> digits);

/// Exact span of the rank-k cylinder with the given digits on the given
/// side; width <= 2^-k.
Interval reconstruct_enclosure(const PhiProgram& program, Side side, std::span<const BigInt> digits);

/// Report-style chain check: never throws, lists the first violated index
/// (1-based) and the r-chain r_0..r_k computed up to the failure point.
struct ValidationReport {
    bool valid = true;
    std::size_t violation_index = 0;
    std::string message;
    std::vector<BigInt> r_chain;
};

ValidationReport validate_digits(const PhiProgram& program, std::span<const BigInt> digits, Side side);

/// validate_digits that throws validation_error instead of reporting, and
/// returns the populated DigitSeq.
DigitSeq make_digit_seq(const PhiProgram& program, Side side, std::vector<BigInt> digits);

} // namespace perron

#endif
