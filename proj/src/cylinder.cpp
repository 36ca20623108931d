#include "perron/cylinder.hpp"

namespace perron {

namespace {

CylinderBox make_box(const PhiProgram& program, Side side, std::span<const BigInt> base) {
    if (base.empty()) throw validation_error("cylinder base must be non-empty");
    CylinderBox box;
    box.side = side;
    box.base.assign(base.begin(), base.end());
    box.rank = base.size();
    box.span = reconstruct_enclosure(program, side, base);
    box.length = box.span.width();
    return box;
}

} // namespace

CylinderBox cyl_bounds_pminus(const PhiProgram& program, std::span<const BigInt> base) {
    return make_box(program, Side::Alternating, base);
}

CylinderBox cyl_bounds_p(const PhiProgram& program, std::span<const BigInt> base) {
    return make_box(program, Side::Positive, base);
}

Rational child_ratio(const PhiProgram& program, std::span<const BigInt> base, const BigInt& i) {
    ValidationReport report = validate_digits(program, base, Side::Alternating);
    if (!report.valid) throw validation_error(report.message, report.violation_index);
    const BigInt& r = report.r_chain.back(); // r_n for n = |base|
    if (i < r + 1)
        throw child_out_of_range_error("child digit " + i.get_str() + " below the chain minimum " +
                                       (r + 1).get_str());
    return Rational(r, (i - 1) * i);
}

Rational adjacent_boundary(const PhiProgram& program, std::span<const BigInt> base) {
    CylinderBox box = cyl_bounds_pminus(program, base);
    std::vector<BigInt> sibling(base.begin(), base.end());
    sibling.back() += 1;
    CylinderBox next = cyl_bounds_pminus(program, sibling);

    const bool odd = box.rank % 2 == 1;
    const Rational& own = odd ? box.span.lo : box.span.hi;
    const Rational& other = odd ? next.span.hi : next.span.lo;
    if (own != other)
        throw error("adjacency identity violated at base rank " + std::to_string(box.rank));
    return own;
}

std::string to_string(Ordering ordering) {
    switch (ordering) {
        case Ordering::Less: return "less";
        case Ordering::Greater: return "greater";
        case Ordering::PrefixEqual: return "prefix-equal";
    }
    return "?";
}

Ordering compare_digitwise(const DigitSeq& a, const DigitSeq& b) {
    if (a.side != b.side) throw side_mismatch_error("cannot compare digits across sides");
    if (!structurally_equal(a.program, b.program))
        throw side_mismatch_error("cannot compare digits across phi programs");

    const std::size_t shared = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < shared; ++k) {
        if (a.digits[k] == b.digits[k]) continue;
        const bool a_smaller_digit = a.digits[k] < b.digits[k];
        if (a.side == Side::Positive)
            return a_smaller_digit ? Ordering::Greater : Ordering::Less;
        const bool even = (k + 1) % 2 == 0;
        if (even) return a_smaller_digit ? Ordering::Less : Ordering::Greater;
        return a_smaller_digit ? Ordering::Greater : Ordering::Less;
    }
    return Ordering::PrefixEqual;
}

} // namespace perron
