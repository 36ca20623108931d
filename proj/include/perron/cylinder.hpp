#ifndef PERRON_CYLINDER_HPP
#define PERRON_CYLINDER_HPP

#include <span>
#include <vector>

#include "perron/expansion.hpp"

namespace perron {

/// A rank-k cylinder: every number whose expansion starts with `base`.
/// Alternating spans are open at both ends; positive spans are half-open
/// (lo excluded, hi included).
struct CylinderBox {
    Side side = Side::Alternating;
    std::vector<BigInt> base;
    std::size_t rank = 0;
    Interval span;
    Rational length;

    int parity() const noexcept { return static_cast<int>(rank % 2); }
};

/// Alternating-side bounds: for odd rank the k-term partial sum is the sup,
/// for even rank the inf; the other endpoint differs by the exact length
/// r_0..r_{k-1} / ((c_1-1)c_1...(c_k-1)c_k).
CylinderBox cyl_bounds_pminus(const PhiProgram& program, std::span<const BigInt> base);

/// Positive-side bounds: (partial sum, partial sum + length].
CylinderBox cyl_bounds_p(const PhiProgram& program, std::span<const BigInt> base);

/// |child(base, i)| / |base| = r_n / ((i-1) i), exact; the children of a
/// cylinder partition its length (sum over i >= r_n + 1 telescopes to 1).
Rational child_ratio(const PhiProgram& program, std::span<const BigInt> base, const BigInt& i);

/// The endpoint shared by base and its sibling with last digit + 1
/// (inf for odd rank, sup for even rank). Both sides of the identity are
/// evaluated independently and checked for exact equality.
Rational adjacent_boundary(const PhiProgram& program, std::span<const BigInt> base);

enum class Ordering { Less, Greater, PrefixEqual };

std::string to_string(Ordering ordering);

/// Order of two expansions from their digits alone. On the alternating
/// side a smaller digit at the first divergence k means a smaller number
/// when k is even and a larger one when k is odd; on the positive side a
/// smaller digit always means a larger number. If one sequence is a prefix
/// of the other the order is undetermined at this depth.
Ordering compare_digitwise(const DigitSeq& a, const DigitSeq& b);

} // namespace perron

#endif
