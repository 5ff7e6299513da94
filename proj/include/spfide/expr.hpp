#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

// Scalar math expressions over the variables x, s and the bound constant
// eps. Trees are immutable after construction and safe to share across
// threads; parse/eval/differentiate are pure functions.

namespace spfide {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Malformed input text. `offset` is the byte position of the offending
// token, `expected` describes what the parser would have accepted there.
struct SyntaxError : Error {
    SyntaxError(std::size_t offset, std::string expected);
    std::size_t offset;
    std::string expected;
};

// Identifier outside the allowed variable/function sets.
struct UnknownIdentifier : Error {
    UnknownIdentifier(std::size_t offset, std::string name);
    std::size_t offset;
    std::string name;
};

struct UnboundVariable : Error {
    explicit UnboundVariable(std::string name);
    std::string name;
};

// Raised instead of silently producing NaN/inf from a bad operand:
// ln(<=0), sqrt(<0), division by zero, 0^negative, negative^non-integer.
struct DomainError : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

enum class Var : std::uint8_t { x = 0, s = 1, eps = 2 };
enum class Func : std::uint8_t { exp, ln, sin, cos, sqrt, abs };

const char* var_name(Var v);
const char* func_name(Func f);

// Variable values for evaluation. Only finite values are accepted.
class Bindings {
public:
    Bindings& set(Var v, double value);
    bool has(Var v) const { return (mask_ >> static_cast<unsigned>(v)) & 1u; }
    double get(Var v) const;  // throws UnboundVariable

private:
    double values_[3] = {0.0, 0.0, 0.0};
    std::uint8_t mask_ = 0;
};

class Expr {
public:
    Expr();  // the literal 0

    static Expr number(double value);
    static Expr variable(Var v);

    bool depends_on(Var v) const;

    struct Node;  // implementation detail, defined in expr.cpp
    using NodePtr = std::shared_ptr<const Node>;

private:
    explicit Expr(NodePtr node) : node_(std::move(node)) {}
    NodePtr node_;

    friend Expr parse_expression(std::string_view text);
    friend double eval(const Expr& e, const Bindings& b);
    friend Expr differentiate(const Expr& e, Var v);
    friend std::string to_string(const Expr& e);
    friend Expr negate(Expr e);
    friend Expr add(Expr a, Expr b);
    friend Expr subtract(Expr a, Expr b);
    friend Expr multiply(Expr a, Expr b);
    friend Expr divide(Expr a, Expr b);
    friend Expr power(Expr base, Expr exponent);
    friend Expr apply(Func f, Expr e);
};

// Standard infix grammar: ^ (right-assoc) > unary - > *,/ > +,- with
// parentheses and name(expr) calls. Variables: x, s, eps.
// Functions: exp, ln, sin, cos, sqrt, abs.
Expr parse_expression(std::string_view text);

// IEEE double evaluation; deterministic for fixed (e, b).
double eval(const Expr& e, const Bindings& b);

// Exact symbolic derivative with respect to x or s (eps is a constant).
Expr differentiate(const Expr& e, Var v);

// Fully parenthesized text form; round-trips through parse_expression
// with bit-identical evaluation.
std::string to_string(const Expr& e);

// Tree builders (no simplification beyond constant folding).
Expr negate(Expr e);
Expr add(Expr a, Expr b);
Expr subtract(Expr a, Expr b);
Expr multiply(Expr a, Expr b);
Expr divide(Expr a, Expr b);
Expr power(Expr base, Expr exponent);
Expr apply(Func f, Expr e);

}  // namespace spfide
