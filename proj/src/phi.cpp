#include "perron/phi.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace perron {

std::string to_string(Side side) {
    return side == Side::Positive ? "positive" : "alternating";
}

Side side_from_string(std::string_view text) {
    if (text == "pos" || text == "positive") return Side::Positive;
    if (text == "alt" || text == "alternating") return Side::Alternating;
    throw validation_error("unknown side: \"" + std::string(text) + "\" (expected pos|alt)");
}

namespace {

// ---------------------------------------------------------------- lexer --

enum class Tok { Int, N, X, LParen, RParen, Plus, Minus, Star, Caret, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
};

std::string tok_name(Tok t) {
    switch (t) {
        case Tok::Int: return "integer";
        case Tok::N: return "'n'";
        case Tok::X: return "'x'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Caret: return "'^'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            out.push_back({Tok::Int, start, std::string(text.substr(start, i - start))});
            continue;
        }
        switch (c) {
            case 'n': out.push_back({Tok::N, i, "n"}); break;
            case 'x': out.push_back({Tok::X, i, "x"}); break;
            case '(': out.push_back({Tok::LParen, i, "("}); break;
            case ')': out.push_back({Tok::RParen, i, ")"}); break;
            case '+': out.push_back({Tok::Plus, i, "+"}); break;
            case '-': out.push_back({Tok::Minus, i, "-"}); break;
            case '*': out.push_back({Tok::Star, i, "*"}); break;
            case '^': out.push_back({Tok::Caret, i, "^"}); break;
            default:
                throw syntax_error(i, "integer, 'n', 'x', '(', ')' or an operator",
                                   "'" + std::string(1, c) + "'");
        }
        ++i;
    }
    out.push_back({Tok::End, text.size(), ""});
    return out;
}

// --------------------------------------------------------------- parser --

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    DslPtr parse() {
        DslPtr e = expr();
        expect(Tok::End, "'+', '-', '*' or end of input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[at_]; }

    Token take() { return tokens_[at_++]; }

    void expect(Tok kind, const std::string& expected) {
        if (peek().kind != kind)
            throw syntax_error(peek().pos, expected,
                               peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'");
        ++at_;
    }

    static DslPtr make(DslExpr::Kind kind, DslPtr lhs = nullptr, DslPtr rhs = nullptr) {
        auto node = std::make_shared<DslExpr>();
        node->kind = kind;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    DslPtr expr() {
        DslPtr lhs = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool add = take().kind == Tok::Plus;
            lhs = make(add ? DslExpr::Kind::Add : DslExpr::Kind::Sub, lhs, term());
        }
        return lhs;
    }

    DslPtr term() {
        DslPtr lhs = factor();
        while (peek().kind == Tok::Star) {
            take();
            lhs = make(DslExpr::Kind::Mul, lhs, factor());
        }
        return lhs;
    }

    // '^' is non-associative: a single application per factor.
    DslPtr factor() {
        DslPtr base = atom();
        if (peek().kind == Tok::Caret) {
            take();
            return make(DslExpr::Kind::Pow, base, atom());
        }
        return base;
    }

    DslPtr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                auto node = std::make_shared<DslExpr>();
                node->kind = DslExpr::Kind::Literal;
                node->literal = BigInt(take().text);
                return node;
            }
            case Tok::N:
                take();
                return make(DslExpr::Kind::Position);
            case Tok::X: {
                take();
                expect(Tok::LParen, "'(' after 'x'");
                DslPtr index = expr();
                expect(Tok::RParen, "')'");
                return make(DslExpr::Kind::Digit, index);
            }
            case Tok::LParen: {
                take();
                DslPtr inner = expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            default:
                throw syntax_error(t.pos, "integer, 'n', 'x(...)' or '('",
                                   t.kind == Tok::End ? "end of input" : "'" + t.text + "'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t at_ = 0;
};

// -------------------------------------------------------------- printer --

// Binding strength, used to insert the minimal parentheses that still
// reparse to an identical tree.
int level(const DslExpr& e) {
    switch (e.kind) {
        case DslExpr::Kind::Add:
        case DslExpr::Kind::Sub: return 1;
        case DslExpr::Kind::Mul: return 2;
        case DslExpr::Kind::Pow: return 3;
        default: return 4;
    }
}

void print(const DslExpr& e, std::string& out);

void print_child(const DslExpr& child, int min_level, std::string& out) {
    if (level(child) < min_level) {
        out += '(';
        print(child, out);
        out += ')';
    } else {
        print(child, out);
    }
}

void print(const DslExpr& e, std::string& out) {
    switch (e.kind) {
        case DslExpr::Kind::Literal: out += e.literal.get_str(); return;
        case DslExpr::Kind::Position: out += 'n'; return;
        case DslExpr::Kind::Digit:
            out += "x(";
            print(*e.lhs, out);
            out += ')';
            return;
        case DslExpr::Kind::Add:
        case DslExpr::Kind::Sub:
            print_child(*e.lhs, 1, out);
            out += e.kind == DslExpr::Kind::Add ? '+' : '-';
            print_child(*e.rhs, 2, out); // right operand must not re-associate
            return;
        case DslExpr::Kind::Mul:
            print_child(*e.lhs, 2, out);
            out += '*';
            print_child(*e.rhs, 3, out);
            return;
        case DslExpr::Kind::Pow:
            print_child(*e.lhs, 4, out);
            out += '^';
            print_child(*e.rhs, 4, out);
            return;
    }
}

// ----------------------------------------------------------- evaluation --

struct Env {
    std::size_t n;
    std::span<const BigInt> prefix;
};

BigInt eval_expr(const DslExpr& e, const Env& env) {
    switch (e.kind) {
        case DslExpr::Kind::Literal: return e.literal;
        case DslExpr::Kind::Position: return BigInt(static_cast<unsigned long>(env.n));
        case DslExpr::Kind::Digit: {
            const BigInt index = eval_expr(*e.lhs, env);
            if (index < 1 || index > static_cast<unsigned long>(env.n))
                throw index_out_of_range_error(index.get_str(), env.n);
            return env.prefix[mpz_get_ui(index.get_mpz_t()) - 1];
        }
        case DslExpr::Kind::Add: return eval_expr(*e.lhs, env) + eval_expr(*e.rhs, env);
        case DslExpr::Kind::Sub: return eval_expr(*e.lhs, env) - eval_expr(*e.rhs, env);
        case DslExpr::Kind::Mul: return eval_expr(*e.lhs, env) * eval_expr(*e.rhs, env);
        case DslExpr::Kind::Pow: {
            const BigInt base = eval_expr(*e.lhs, env);
            const BigInt exponent = eval_expr(*e.rhs, env);
            if (exponent < 0)
                throw non_positive_phi_error(env.n, "negative exponent " + exponent.get_str());
            if (!exponent.fits_ulong_p() || mpz_get_ui(exponent.get_mpz_t()) > (1ul << 24))
                throw depth_error("exponent " + exponent.get_str() + " exceeds the evaluation guard");
            BigInt out;
            mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), mpz_get_ui(exponent.get_mpz_t()));
            return out;
        }
    }
    throw error("unreachable phi node");
}

bool refers_to_context(const DslExpr& e) {
    switch (e.kind) {
        case DslExpr::Kind::Literal: return false;
        case DslExpr::Kind::Position:
        case DslExpr::Kind::Digit: return true;
        case DslExpr::Kind::Pow:
        case DslExpr::Kind::Add:
        case DslExpr::Kind::Sub:
        case DslExpr::Kind::Mul: return refers_to_context(*e.lhs) || refers_to_context(*e.rhs);
    }
    return true;
}

std::string builtin_source(BuiltinFamily family) {
    switch (family) {
        case BuiltinFamily::Luroth: return "1";
        case BuiltinFamily::ModifiedEngel:
        case BuiltinFamily::Pierce: return "x(n)";
        case BuiltinFamily::AlternatingEngel: return "x(n)-1";
        case BuiltinFamily::AlternatingSylvester: return "(x(n)-1)*x(n)";
    }
    throw error("unreachable family");
}

} // namespace

std::string pretty_print(const DslExpr& expr) {
    std::string out;
    print(expr, out);
    return out;
}

bool structurally_equal(const DslExpr& a, const DslExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case DslExpr::Kind::Literal: return a.literal == b.literal;
        case DslExpr::Kind::Position: return true;
        case DslExpr::Kind::Digit: return structurally_equal(*a.lhs, *b.lhs);
        default:
            return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

PhiProgram::PhiProgram(BigInt phi0, BuiltinFamily family)
    : phi0_(std::move(phi0)), rule_(family), source_(builtin_source(family)) {
    if (phi0_ < 1) throw validation_error("phi0 must be >= 1");
    if (family == BuiltinFamily::Luroth) constant_ = BigInt(1);
}

PhiProgram::PhiProgram(BigInt phi0, DslPtr rule) : phi0_(std::move(phi0)), rule_(std::move(rule)) {
    if (phi0_ < 1) throw validation_error("phi0 must be >= 1");
    const DslPtr& e = std::get<DslPtr>(rule_);
    source_ = pretty_print(*e);
    if (!refers_to_context(*e)) {
        const BigInt value = eval_expr(*e, Env{0, {}});
        if (value < 1) throw non_positive_phi_error(0, "constant rule " + value.get_str());
        constant_ = value;
    }
}

bool structurally_equal(const PhiProgram& a, const PhiProgram& b) {
    return a.phi0() == b.phi0() && a.source_text() == b.source_text();
}

PhiProgram parse_phi_spec(std::string_view text, const BigInt& phi0) {
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
    if (blank) throw empty_input_error();
    Parser parser(lex(text));
    return PhiProgram(phi0, parser.parse());
}

PhiProgram builtin_family(std::string_view name) {
    static const std::map<std::string, BuiltinFamily, std::less<>> catalog = {
        {"luroth", BuiltinFamily::Luroth},
        {"modified-engel", BuiltinFamily::ModifiedEngel},
        {"alternating-engel", BuiltinFamily::AlternatingEngel},
        {"pierce", BuiltinFamily::Pierce},
        {"alternating-sylvester", BuiltinFamily::AlternatingSylvester},
    };
    auto it = catalog.find(name);
    if (it == catalog.end()) throw unknown_family_error(std::string(name));
    return PhiProgram(BigInt(1), it->second);
}

std::string family_name(BuiltinFamily family) {
    switch (family) {
        case BuiltinFamily::Luroth: return "luroth";
        case BuiltinFamily::ModifiedEngel: return "modified-engel";
        case BuiltinFamily::AlternatingEngel: return "alternating-engel";
        case BuiltinFamily::Pierce: return "pierce";
        case BuiltinFamily::AlternatingSylvester: return "alternating-sylvester";
    }
    throw error("unreachable family");
}

const std::vector<std::string>& builtin_family_names() {
    static const std::vector<std::string> names = {
        "luroth", "modified-engel", "alternating-engel", "pierce", "alternating-sylvester"};
    return names;
}

BigInt eval_phi(const PhiProgram& program, std::size_t n, std::span<const BigInt> prefix) {
    if (n == 0) return program.phi0();
    if (prefix.size() < n)
        throw validation_error("phi_" + std::to_string(n) + " needs " + std::to_string(n) +
                               " digits, got " + std::to_string(prefix.size()));
    if (program.is_builtin()) {
        const BigInt& last = prefix[n - 1];
        BigInt value;
        switch (program.family()) {
            case BuiltinFamily::Luroth: return BigInt(1);
            case BuiltinFamily::ModifiedEngel:
            case BuiltinFamily::Pierce: value = last; break;
            case BuiltinFamily::AlternatingEngel: value = last - 1; break;
            case BuiltinFamily::AlternatingSylvester: value = (last - 1) * last; break;
        }
        if (value < 1)
            throw non_positive_phi_error(n, "value " + value.get_str() + " from digit " + last.get_str());
        return value;
    }
    const BigInt value = eval_expr(*program.expr(), Env{n, prefix.first(n)});
    if (value < 1)
        throw non_positive_phi_error(n, "value " + value.get_str() + " for digits prefix of length " +
                                            std::to_string(n));
    return value;
}

} // namespace perron
