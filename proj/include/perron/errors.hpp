#ifndef PERRON_ERRORS_HPP
#define PERRON_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perron {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed phi expression text. Carries the byte offset of the offending
/// token and a human-readable list of what would have been accepted there.
class syntax_error : public error {
public:
    syntax_error(std::size_t position, std::string expected, const std::string& found)
        : error("syntax error at position " + std::to_string(position) + ": expected " +
                expected + ", found " + found),
          position_(position),
          expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

class empty_input_error : public error {
public:
    empty_input_error() : error("empty phi expression") {}
};

class unknown_family_error : public error {
public:
    explicit unknown_family_error(const std::string& name)
        : error("unknown family: \"" + name + "\"") {}
};

/// A phi evaluation produced a value < 1.
class non_positive_phi_error : public error {
public:
    non_positive_phi_error(std::size_t n, const std::string& detail)
        : error("phi_" + std::to_string(n) + " evaluated to a non-positive value (" + detail + ")"),
          n_(n) {}

    std::size_t n() const noexcept { return n_; }

private:
    std::size_t n_;
};

/// x(e) referenced a digit index outside [1, n].
class index_out_of_range_error : public error {
public:
    index_out_of_range_error(const std::string& index, std::size_t n)
        : error("digit index x(" + index + ") outside [1, " + std::to_string(n) + "]") {}
};

/// Digit chain or other precondition violated; carries the first bad index
/// (1-based) when it applies.
class validation_error : public error {
public:
    explicit validation_error(const std::string& what, std::size_t index = 0)
        : error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Input number outside the representable interval.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

class child_out_of_range_error : public error {
public:
    explicit child_out_of_range_error(const std::string& what) : error(what) {}
};

class side_mismatch_error : public error {
public:
    explicit side_mismatch_error(const std::string& what) : error(what) {}
};

class empty_restriction_error : public error {
public:
    explicit empty_restriction_error(const std::string& what) : error(what) {}
};

/// Digit-magnitude or enumeration guard tripped (runaway phi program).
class depth_error : public error {
public:
    explicit depth_error(const std::string& what) : error(what) {}
};

/// Sampling-resolution doubling hit its cap.
class precision_exhausted_error : public error {
public:
    explicit precision_exhausted_error(const std::string& what) : error(what) {}
};

} // namespace perron

#endif
