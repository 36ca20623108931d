#include "perron/expansion.hpp"

#include <utility>

namespace perron {

namespace {

// Shared walker over a digit chain: maintains r_n, the digit products
// D_k = (c_1-1)c_1...(c_k-1)c_k, and the r-product N = r_0...r_{k-1} so
// that the rank-k cylinder length is N / D.
struct ChainState {
    const PhiProgram& program;
    std::vector<BigInt> digits;
    std::vector<BigInt> r_values; // r_0..r_{k-1} for k digits
    BigInt r_product = 1;         // r_0...r_{k-1}
    BigInt digit_product = 1;     // D_k

    explicit ChainState(const PhiProgram& p) : program(p) {
        r_values.reserve(16);
        digits.reserve(16);
    }

    const BigInt& next_r() {
        if (r_values.size() == digits.size() + 1) return r_values.back();
        const BigInt r = eval_phi(program, digits.size(), digits);
        r_values.push_back(r);
        return r_values.back();
    }

    // Appends a digit already known to satisfy digit >= r + 1.
    void push(const BigInt& digit, const BigInt& r) {
        r_product *= r;
        digit_product *= (digit - 1) * digit;
        digits.push_back(digit);
    }

    Rational length() const { return Rational(r_product, digit_product); }
};

BigInt floor_quotient(const BigInt& num, const BigInt& den) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

void check_digit_guard(const BigInt& digit, const ExtractLimits& limits, std::size_t rank) {
    if (bit_length(digit) > limits.max_digit_bits)
        throw depth_error("digit " + std::to_string(rank) + " exceeds 2^" +
                          std::to_string(limits.max_digit_bits) + " (runaway digit growth)");
}

} // namespace

DigitOutcome extract_pminus(const Rational& x, const PhiProgram& program, const ExtractLimits& limits) {
    if (!(Rational(0) < x && x < Rational(1)))
        throw domain_error("alternating-side input must lie in (0,1), got " + x.str());

    ChainState chain(program);
    Rational endpoint;       // partial sum after k digits: sup for odd k, inf for even k
    Rational distance = x;   // |x - endpoint|, measured to the far end of the current cylinder
    int sign = 1;

    for (std::size_t k = 0; k < limits.max_depth; ++k) {
        const BigInt r = chain.next_r();
        // v = (r_0..r_k) / (D_k * x_k); the next digit is floor(v) + 1.
        const BigInt v_num = chain.r_product * r * distance.den();
        const BigInt v_den = chain.digit_product * distance.num();
        const BigInt digit = floor_quotient(v_num, v_den) + 1;
        check_digit_guard(digit, limits, k + 1);

        const Rational term(chain.r_product * r, chain.digit_product * (digit - 1));
        endpoint += sign > 0 ? term : -term;
        sign = -sign;
        chain.push(digit, r);
        distance = term - distance;

        if (distance.is_zero()) {
            // x is exactly the far endpoint of the fresh cylinder, so it has
            // no representation; the digits collected before this rank are
            // the full strict-containment prefix.
            BoundaryWitness witness;
            witness.rank = k + 1;
            witness.base = chain.digits;
            witness.kind = witness.rank % 2 == 1 ? BoundaryKind::Sup : BoundaryKind::Inf;
            witness.endpoint = endpoint;
            chain.digits.pop_back();
            chain.r_values.resize(chain.digits.size());
            return DigitOutcome{
                DigitSeq{Side::Alternating, program, std::move(chain.digits), std::move(chain.r_values)},
                std::move(witness)};
        }
        if (limits.target_width && chain.length() <= *limits.target_width) break;
    }
    chain.r_values.resize(chain.digits.size());
    return DigitOutcome{
        DigitSeq{Side::Alternating, program, std::move(chain.digits), std::move(chain.r_values)},
        std::nullopt};
}

DigitSeq extract_p(const Rational& x, const PhiProgram& program, const ExtractLimits& limits) {
    if (!(Rational(0) < x && x <= Rational(1)))
        throw domain_error("positive-side input must lie in (0,1], got " + x.str());

    ChainState chain(program);
    Rational remainder = x; // x minus the partial sum; stays in (0, length]

    for (std::size_t k = 0; k < limits.max_depth; ++k) {
        const BigInt r = chain.next_r();
        const BigInt v_num = chain.r_product * r * remainder.den();
        const BigInt v_den = chain.digit_product * remainder.num();
        // floor(v) + 1 uniformly; exact endpoints (v integral) continue
        // with the minimal digit of the next cylinder.
        const BigInt digit = floor_quotient(v_num, v_den) + 1;
        check_digit_guard(digit, limits, k + 1);

        remainder -= Rational(chain.r_product * r, chain.digit_product * digit);
        chain.push(digit, r);
        if (limits.target_width && chain.length() <= *limits.target_width) break;
    }
    chain.r_values.resize(chain.digits.size());
    return DigitSeq{Side::Positive, program, std::move(chain.digits), std::move(chain.r_values)};
}

namespace {

// Validating walk shared by the partial sums and cylinder spans.
// term(k) for the alternating side is N_k / (D_k (q_{k+1}-1)), for the
// positive side N_k / (D_k p_{k+1}).
struct SumWalk {
    Rational sum;
    ChainState chain;

    SumWalk(const PhiProgram& program, std::span<const BigInt> digits, Side side)
        : chain(program) {
        int sign = 1;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            const BigInt& r = chain.next_r();
            if (digits[i] < r + 1)
                throw validation_error("digit " + std::to_string(i + 1) + " is " +
                                           digits[i].get_str() + ", chain requires >= " +
                                           (r + 1).get_str(),
                                       i + 1);
            const BigInt term_den =
                chain.digit_product * (side == Side::Alternating ? digits[i] - 1 : digits[i]);
            const Rational term(chain.r_product * r, term_den);
            if (side == Side::Alternating) {
                sum += sign > 0 ? term : -term;
                sign = -sign;
            } else {
                sum += term;
            }
            chain.push(digits[i], r);
        }
    }
};

} // namespace

Rational partial_sum_pminus(const PhiProgram& program, std::span<const BigInt> digits) {
    if (digits.empty()) throw validation_error("partial sum needs at least one digit");
    return SumWalk(program, digits, Side::Alternating).sum;
}

Rational partial_sum_p(const PhiProgram& program, std::span<const BigInt> digits) {
    if (digits.empty()) throw validation_error("partial sum needs at least one digit");
    return SumWalk(program, digits, Side::Positive).sum;
}

Interval reconstruct_enclosure(const PhiProgram& program, Side side, std::span<const BigInt> digits) {
    if (digits.empty()) throw validation_error("enclosure needs at least one digit");
    SumWalk walk(program, digits, side);
    const Rational length = walk.chain.length();
    if (side == Side::Positive) return Interval{walk.sum, walk.sum + length, true, false};
    if (digits.size() % 2 == 1) return Interval{walk.sum - length, walk.sum, true, true};
    return Interval{walk.sum, walk.sum + length, true, true};
}

ValidationReport validate_digits(const PhiProgram& program, std::span<const BigInt> digits, Side side) {
    (void)side; // the chain constraint is identical on both sides
    ValidationReport report;
    std::vector<BigInt> prefix;
    prefix.reserve(digits.size());
    for (std::size_t i = 0; i <= digits.size(); ++i) {
        BigInt r;
        try {
            r = eval_phi(program, i, prefix);
        } catch (const error& e) {
            report.valid = false;
            report.violation_index = i;
            report.message = e.what();
            return report;
        }
        report.r_chain.push_back(r);
        if (i == digits.size()) break;
        if (digits[i] < r + 1) {
            report.valid = false;
            report.violation_index = i + 1;
            report.message = "digit " + std::to_string(i + 1) + " is " + digits[i].get_str() +
                             ", needs >= " + (r + 1).get_str();
            return report;
        }
        prefix.push_back(digits[i]);
    }
    return report;
}

DigitSeq make_digit_seq(const PhiProgram& program, Side side, std::vector<BigInt> digits) {
    ValidationReport report = validate_digits(program, digits, side);
    if (!report.valid) throw validation_error(report.message, report.violation_index);
    report.r_chain.resize(digits.size()); // keep r_0..r_{k-1}
    return DigitSeq{side, program, std::move(digits), std::move(report.r_chain)};
}

} // namespace perron
