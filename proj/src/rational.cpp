#include "perron/rational.hpp"

#include <cctype>
#include <cmath>

namespace perron {

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw validation_error("empty rational literal");
    auto check_int = [&](std::string_view part) {
        if (part.empty()) throw validation_error("malformed rational: \"" + std::string(text) + "\"");
        std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (start == part.size()) throw validation_error("malformed rational: \"" + std::string(text) + "\"");
        for (std::size_t i = start; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                throw validation_error("malformed rational: \"" + std::string(text) + "\"");
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        check_int(text);
        return Rational(BigInt(std::string(text)));
    }
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    check_int(num);
    check_int(den);
    return Rational(BigInt(std::string(num)), BigInt(std::string(den)));
}

std::size_t bit_length(const BigInt& z) {
    if (z == 0) return 0;
    return mpz_sizeinbase(z.get_mpz_t(), 2);
}

long double log_approx(const BigInt& z) {
    if (z <= 0) throw domain_error("log of non-positive integer");
    static const long double ln2 = std::log(2.0L);
    const std::size_t bits = bit_length(z);
    if (bits <= 64) {
        return std::log(static_cast<long double>(mpz_get_ui(z.get_mpz_t())));
    }
    // Top 64 bits carry the full long-double significand; the rest is the
    // binary exponent.
    BigInt top;
    mpz_tdiv_q_2exp(top.get_mpz_t(), z.get_mpz_t(), bits - 64);
    return std::log(static_cast<long double>(mpz_get_ui(top.get_mpz_t()))) +
           static_cast<long double>(bits - 64) * ln2;
}

long double log_approx(const Rational& x) {
    if (x.sign() <= 0) throw domain_error("log of non-positive rational");
    return log_approx(x.num()) - log_approx(x.den());
}

} // namespace perron
