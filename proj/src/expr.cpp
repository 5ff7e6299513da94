#include "spfide/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace spfide {

SyntaxError::SyntaxError(std::size_t offset_, std::string expected_)
    : Error("syntax error at byte " + std::to_string(offset_) + ": expected " + expected_),
      offset(offset_),
      expected(std::move(expected_)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset_, std::string name_)
    : Error("unknown identifier '" + name_ + "' at byte " + std::to_string(offset_)),
      offset(offset_),
      name(std::move(name_)) {}

UnboundVariable::UnboundVariable(std::string name_)
    : Error("unbound variable '" + name_ + "'"), name(std::move(name_)) {}

const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::s: return "s";
        case Var::eps: return "eps";
    }
    return "?";
}

const char* func_name(Func f) {
    switch (f) {
        case Func::exp: return "exp";
        case Func::ln: return "ln";
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::sqrt: return "sqrt";
        case Func::abs: return "abs";
    }
    return "?";
}

Bindings& Bindings::set(Var v, double value) {
    if (!std::isfinite(value))
        throw InvalidArgument(std::string("binding for '") + var_name(v) + "' must be finite");
    values_[static_cast<unsigned>(v)] = value;
    mask_ |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
    return *this;
}

double Bindings::get(Var v) const {
    if (!has(v)) throw UnboundVariable(var_name(v));
    return values_[static_cast<unsigned>(v)];
}

struct Expr::Node {
    enum class Kind : std::uint8_t {
        number,
        variable,
        negate,
        add,
        subtract,
        multiply,
        divide,
        power,
        call
    };
    Kind kind;
    Var var = Var::x;
    Func fn = Func::exp;
    double value = 0.0;
    NodePtr lhs;
    NodePtr rhs;
};

using Node = Expr::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

namespace {

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
}

NodePtr make_variable(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var = v;
    return n;
}

NodePtr make_unary(Kind k, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_call(Func f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->fn = f;
    n->lhs = std::move(a);
    return n;
}

double eval_node(const Node& n, const Bindings& b);

double eval_call(Func f, double arg) {
    switch (f) {
        case Func::exp:
            return std::exp(arg);
        case Func::ln:
            if (arg <= 0.0) throw DomainError("ln of a non-positive argument");
            return std::log(arg);
        case Func::sin:
            return std::sin(arg);
        case Func::cos:
            return std::cos(arg);
        case Func::sqrt:
            if (arg < 0.0) throw DomainError("sqrt of a negative argument");
            return std::sqrt(arg);
        case Func::abs:
            return std::fabs(arg);
    }
    throw Error("unreachable function kind");
}

double eval_node(const Node& n, const Bindings& b) {
    switch (n.kind) {
        case Kind::number:
            return n.value;
        case Kind::variable:
            return b.get(n.var);
        case Kind::negate:
            return -eval_node(*n.lhs, b);
        case Kind::add:
            return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
        case Kind::subtract:
            return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
        case Kind::multiply:
            return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
        case Kind::divide: {
            const double num = eval_node(*n.lhs, b);
            const double den = eval_node(*n.rhs, b);
            if (den == 0.0) throw DomainError("division by zero");
            return num / den;
        }
        case Kind::power: {
            const double base = eval_node(*n.lhs, b);
            const double exponent = eval_node(*n.rhs, b);
            if (base == 0.0 && exponent < 0.0)
                throw DomainError("zero raised to a negative power");
            if (base < 0.0 &&
                (std::nearbyint(exponent) != exponent || std::fabs(exponent) >= 0x1p53))
                throw DomainError("negative base raised to a non-integer power");
            return std::pow(base, exponent);
        }
        case Kind::call:
            return eval_call(n.fn, eval_node(*n.lhs, b));
    }
    throw Error("unreachable node kind");
}

bool node_depends_on(const Node& n, Var v) {
    switch (n.kind) {
        case Kind::number:
            return false;
        case Kind::variable:
            return n.var == v;
        case Kind::negate:
        case Kind::call:
            return node_depends_on(*n.lhs, v);
        default:
            return node_depends_on(*n.lhs, v) || node_depends_on(*n.rhs, v);
    }
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == Kind::number && n->value == v;
}

// Folding builders used by differentiation. They apply only identities
// that hold exactly in IEEE arithmetic for finite operands.
NodePtr fold_number(double v, NodePtr fallback) {
    if (std::isfinite(v)) return make_number(v);
    return fallback;
}

NodePtr d_add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number)
        return fold_number(a->value + b->value, make_binary(Kind::add, a, b));
    return make_binary(Kind::add, std::move(a), std::move(b));
}

NodePtr d_neg(NodePtr a) {
    if (a->kind == Kind::number) return make_number(-a->value);
    if (a->kind == Kind::negate) return a->lhs;
    return make_unary(Kind::negate, std::move(a));
}

NodePtr d_sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return d_neg(std::move(b));
    if (a->kind == Kind::number && b->kind == Kind::number)
        return fold_number(a->value - b->value, make_binary(Kind::subtract, a, b));
    return make_binary(Kind::subtract, std::move(a), std::move(b));
}

NodePtr d_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_number(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number)
        return fold_number(a->value * b->value, make_binary(Kind::multiply, a, b));
    return make_binary(Kind::multiply, std::move(a), std::move(b));
}

NodePtr d_div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return make_number(0.0);
    if (is_const(b, 1.0)) return a;
    if (a->kind == Kind::number && b->kind == Kind::number && b->value != 0.0)
        return fold_number(a->value / b->value, make_binary(Kind::divide, a, b));
    return make_binary(Kind::divide, std::move(a), std::move(b));
}

NodePtr d_pow(NodePtr a, NodePtr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(b, 0.0)) return make_number(1.0);
    return make_binary(Kind::power, std::move(a), std::move(b));
}

NodePtr diff_node(const NodePtr& n, Var v) {
    switch (n->kind) {
        case Kind::number:
            return make_number(0.0);
        case Kind::variable:
            return make_number(n->var == v ? 1.0 : 0.0);
        case Kind::negate:
            return d_neg(diff_node(n->lhs, v));
        case Kind::add:
            return d_add(diff_node(n->lhs, v), diff_node(n->rhs, v));
        case Kind::subtract:
            return d_sub(diff_node(n->lhs, v), diff_node(n->rhs, v));
        case Kind::multiply:
            return d_add(d_mul(diff_node(n->lhs, v), n->rhs),
                         d_mul(n->lhs, diff_node(n->rhs, v)));
        case Kind::divide:
            return d_div(d_sub(d_mul(diff_node(n->lhs, v), n->rhs),
                               d_mul(n->lhs, diff_node(n->rhs, v))),
                         d_mul(n->rhs, n->rhs));
        case Kind::power: {
            const bool base_dep = node_depends_on(*n->lhs, v);
            const bool exp_dep = node_depends_on(*n->rhs, v);
            if (!base_dep && !exp_dep) return make_number(0.0);
            if (!exp_dep) {
                // d(u^c) = c * u^(c-1) * u'
                NodePtr cm1 = d_sub(n->rhs, make_number(1.0));
                return d_mul(d_mul(n->rhs, d_pow(n->lhs, cm1)), diff_node(n->lhs, v));
            }
            if (!base_dep) {
                // d(c^u) = c^u * ln(c) * u'
                return d_mul(d_mul(n, make_call(Func::ln, n->lhs)), diff_node(n->rhs, v));
            }
            // d(u^w) = u^w * (w' ln u + w u'/u)
            NodePtr term1 = d_mul(diff_node(n->rhs, v), make_call(Func::ln, n->lhs));
            NodePtr term2 = d_mul(n->rhs, d_div(diff_node(n->lhs, v), n->lhs));
            return d_mul(n, d_add(std::move(term1), std::move(term2)));
        }
        case Kind::call: {
            NodePtr inner = diff_node(n->lhs, v);
            switch (n->fn) {
                case Func::exp:
                    return d_mul(make_call(Func::exp, n->lhs), std::move(inner));
                case Func::ln:
                    return d_div(std::move(inner), n->lhs);
                case Func::sin:
                    return d_mul(make_call(Func::cos, n->lhs), std::move(inner));
                case Func::cos:
                    return d_neg(d_mul(make_call(Func::sin, n->lhs), std::move(inner)));
                case Func::sqrt:
                    return d_div(std::move(inner),
                                 d_mul(make_number(2.0), make_call(Func::sqrt, n->lhs)));
                case Func::abs:
                    // u/|u| * u'; undefined at u = 0 (division by zero there)
                    return d_mul(d_div(n->lhs, make_call(Func::abs, n->lhs)),
                                 std::move(inner));
            }
            throw Error("unreachable function kind");
        }
    }
    throw Error("unreachable node kind");
}

std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::number:
            out += format_number(n.value);
            return;
        case Kind::variable:
            out += var_name(n.var);
            return;
        case Kind::negate:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case Kind::add:
        case Kind::subtract:
        case Kind::multiply:
        case Kind::divide:
        case Kind::power: {
            char op = '+';
            if (n.kind == Kind::subtract) op = '-';
            else if (n.kind == Kind::multiply) op = '*';
            else if (n.kind == Kind::divide) op = '/';
            else if (n.kind == Kind::power) op = '^';
            out += '(';
            print_node(*n.lhs, out);
            out += op;
            print_node(*n.rhs, out);
            out += ')';
            return;
        }
        case Kind::call:
            out += func_name(n.fn);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
    }
}

// Recursive-descent parser. Precedence: ^ (right-assoc, exponent may be
// signed) > unary - > *,/ > +,-.
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (consume('+')) lhs = make_binary(Kind::add, lhs, parse_product());
            else if (consume('-')) lhs = make_binary(Kind::subtract, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (consume('*')) lhs = make_binary(Kind::multiply, lhs, parse_unary());
            else if (consume('/')) lhs = make_binary(Kind::divide, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return make_unary(Kind::negate, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (consume('^')) return make_binary(Kind::power, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw SyntaxError(pos_, "a number, variable, function or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!consume(')')) throw SyntaxError(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw SyntaxError(pos_, "a number, variable, function or '('");
    }

    NodePtr parse_number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) throw SyntaxError(pos_, "a number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_number(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return make_variable(Var::x);
        if (name == "s") return make_variable(Var::s);
        if (name == "eps") return make_variable(Var::eps);
        Func fn;
        if (name == "exp") fn = Func::exp;
        else if (name == "ln") fn = Func::ln;
        else if (name == "sin") fn = Func::sin;
        else if (name == "cos") fn = Func::cos;
        else if (name == "sqrt") fn = Func::sqrt;
        else if (name == "abs") fn = Func::abs;
        else throw UnknownIdentifier(start, name);
        if (!consume('(')) throw SyntaxError(pos_, "'(' after function name");
        NodePtr arg = parse_sum();
        if (!consume(')')) throw SyntaxError(pos_, "')'");
        return make_call(fn, arg);
    }
};

}  // namespace

Expr::Expr() : node_(make_number(0.0)) {}

Expr Expr::number(double value) { return Expr(make_number(value)); }

Expr Expr::variable(Var v) { return Expr(make_variable(v)); }

bool Expr::depends_on(Var v) const { return node_depends_on(*node_, v); }

Expr parse_expression(std::string_view text) { return Expr(Parser(text).run()); }

double eval(const Expr& e, const Bindings& b) { return eval_node(*e.node_, b); }

Expr differentiate(const Expr& e, Var v) {
    if (v == Var::eps)
        throw InvalidArgument("cannot differentiate with respect to the constant eps");
    return Expr(diff_node(e.node_, v));
}

std::string to_string(const Expr& e) {
    std::string out;
    print_node(*e.node_, out);
    return out;
}

Expr negate(Expr e) { return Expr(make_unary(Kind::negate, std::move(e.node_))); }
Expr add(Expr a, Expr b) {
    return Expr(make_binary(Kind::add, std::move(a.node_), std::move(b.node_)));
}
Expr subtract(Expr a, Expr b) {
    return Expr(make_binary(Kind::subtract, std::move(a.node_), std::move(b.node_)));
}
Expr multiply(Expr a, Expr b) {
    return Expr(make_binary(Kind::multiply, std::move(a.node_), std::move(b.node_)));
}
Expr divide(Expr a, Expr b) {
    return Expr(make_binary(Kind::divide, std::move(a.node_), std::move(b.node_)));
}
Expr power(Expr base, Expr exponent) {
    return Expr(make_binary(Kind::power, std::move(base.node_), std::move(exponent.node_)));
}
Expr apply(Func f, Expr e) { return Expr(make_call(f, std::move(e.node_))); }

}  // namespace spfide
