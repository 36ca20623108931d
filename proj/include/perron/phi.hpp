#ifndef PERRON_PHI_HPP
#define PERRON_PHI_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "perron/rational.hpp"

namespace perron {

/// Which of the two expansions a digit sequence lives on.
enum class Side { Positive, Alternating };

std::string to_string(Side side);
Side side_from_string(std::string_view text);

/// The catalog of §-style built-in digit rules. ModifiedEngel and Pierce
/// share the same rule (phi_n = x_n); they differ only in which side they
/// are conventionally used on.
enum class BuiltinFamily { Luroth, ModifiedEngel, AlternatingEngel, Pierce, AlternatingSylvester };

/// Expression tree for custom phi rules.
///
/// Grammar:  expr   := term (('+'|'-') term)*
///           term   := factor ('*' factor)*
///           factor := atom ('^' atom)?
///           atom   := INT | 'n' | 'x' '(' expr ')' | '(' expr ')'
///
/// There is no division, so every evaluation stays integral.
struct DslExpr {
    enum class Kind { Literal, Position, Digit, Add, Sub, Mul, Pow };

    Kind kind;
    BigInt literal;                        // Kind::Literal
    std::shared_ptr<const DslExpr> lhs;    // binary ops; Digit index expression
    std::shared_ptr<const DslExpr> rhs;    // binary ops
};

using DslPtr = std::shared_ptr<const DslExpr>;

/// Canonical text of an expression (minimal parentheses; reparsing yields a
/// structurally identical tree).
std::string pretty_print(const DslExpr& expr);

bool structurally_equal(const DslExpr& a, const DslExpr& b);

/// Executable description of the sequence P = (phi_n): the constant phi_0
/// plus either a built-in rule or a parsed expression for phi_n (n >= 1).
/// Immutable after construction; safe to share across threads.
class PhiProgram {
public:
    PhiProgram(BigInt phi0, BuiltinFamily family);
    PhiProgram(BigInt phi0, DslPtr rule);

    const BigInt& phi0() const noexcept { return phi0_; }
    bool is_builtin() const noexcept { return std::holds_alternative<BuiltinFamily>(rule_); }
    BuiltinFamily family() const { return std::get<BuiltinFamily>(rule_); }
    const DslPtr& expr() const { return std::get<DslPtr>(rule_); }

    /// Canonical phi_n text; for built-ins this is the equivalent expression
    /// ("1", "x(n)", "x(n)-1", "(x(n)-1)*x(n)").
    const std::string& source_text() const noexcept { return source_; }

    /// phi_n as a constant, when the rule references neither n nor any
    /// digit. Used by the exact digit-law columns.
    const std::optional<BigInt>& constant_rule() const noexcept { return constant_; }

private:
    BigInt phi0_;
    std::variant<BuiltinFamily, DslPtr> rule_;
    std::string source_;
    std::optional<BigInt> constant_;
};

/// Programs are compared by meaning: phi_0 plus canonical rule text.
/// builtin_family("pierce") == builtin_family("modified-engel").
bool structurally_equal(const PhiProgram& a, const PhiProgram& b);

/// Parses a phi_n rule. Throws syntax_error / empty_input_error.
PhiProgram parse_phi_spec(std::string_view text, const BigInt& phi0);

/// Looks up "luroth", "modified-engel", "alternating-engel", "pierce" or
/// "alternating-sylvester". Throws unknown_family_error otherwise.
PhiProgram builtin_family(std::string_view name);

std::string family_name(BuiltinFamily family);

/// All built-in names in catalog order.
const std::vector<std::string>& builtin_family_names();

/// r_n = phi_n(prefix[0..n-1]); r_0 = phi_0. Throws non_positive_phi_error
/// when the rule evaluates below 1 and index_out_of_range_error when an
/// x(e) index falls outside [1, n]. Pure and reentrant.
BigInt eval_phi(const PhiProgram& program, std::size_t n, std::span<const BigInt> prefix);

} // namespace perron

#endif
