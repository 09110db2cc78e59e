#include "curvlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "curvlab/error.hpp"

namespace curvlab {

ScalarExpr::ScalarExpr() : node_(nullptr)
{
    static const auto zero = std::make_shared<const Node>();
    node_ = zero;
}

ScalarExpr ScalarExpr::constant(double value, long offset)
{
    Node n;
    n.op = Op::constant;
    n.value = value;
    n.offset = offset;
    return ScalarExpr(std::make_shared<const Node>(std::move(n)));
}

ScalarExpr ScalarExpr::variable(int index, long offset)
{
    Node n;
    n.op = Op::variable;
    n.var = index;
    n.offset = offset;
    return ScalarExpr(std::make_shared<const Node>(std::move(n)));
}

ScalarExpr ScalarExpr::unary(Op op, ScalarExpr arg, long offset)
{
    Node n;
    n.op = op;
    n.args[0] = std::move(arg);
    n.offset = offset;
    return ScalarExpr(std::make_shared<const Node>(std::move(n)));
}

ScalarExpr ScalarExpr::binary(Op op, ScalarExpr lhs, ScalarExpr rhs, long offset)
{
    Node n;
    n.op = op;
    n.args[0] = std::move(lhs);
    n.args[1] = std::move(rhs);
    n.offset = offset;
    return ScalarExpr(std::make_shared<const Node>(std::move(n)));
}

ScalarExpr ScalarExpr::power(ScalarExpr base, double exponent, long offset)
{
    return binary(Op::pow, std::move(base), constant(exponent, offset), offset);
}

int ScalarExpr::arity() const noexcept
{
    switch (op()) {
    case Op::constant:
    case Op::variable: return 0;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: return 2;
    default: return 1;
    }
}

int ScalarExpr::max_variable() const
{
    if (op() == Op::variable) return variable_index();
    int m = -1;
    for (int i = 0; i < arity(); ++i) m = std::max(m, arg(i).max_variable());
    return m;
}

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b)
{
    if (a.op() != b.op()) return false;
    if (a.op() == ScalarExpr::Op::constant) return a.constant_value() == b.constant_value();
    if (a.op() == ScalarExpr::Op::variable) return a.variable_index() == b.variable_index();
    for (int i = 0; i < a.arity(); ++i)
        if (!structurally_equal(a.arg(i), b.arg(i))) return false;
    return true;
}

namespace {

using Op = ScalarExpr::Op;

struct Function {
    std::string_view name;
    Op op;
};

constexpr std::array<Function, 6> kFunctions{{{"sin", Op::sin},
                                               {"cos", Op::cos},
                                               {"tan", Op::tan},
                                               {"exp", Op::exp},
                                               {"log", Op::log},
                                               {"sqrt", Op::sqrt}}};

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

    ScalarExpr parse()
    {
        ScalarExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    ScalarExpr expr()
    {
        ScalarExpr lhs = term();
        for (;;) {
            skip_ws();
            const long at = static_cast<long>(pos_);
            if (accept('+'))
                lhs = ScalarExpr::binary(Op::add, lhs, term(), at);
            else if (accept('-'))
                lhs = ScalarExpr::binary(Op::sub, lhs, term(), at);
            else
                return lhs;
        }
    }

    ScalarExpr term()
    {
        ScalarExpr lhs = factor();
        for (;;) {
            skip_ws();
            const long at = static_cast<long>(pos_);
            if (accept('*'))
                lhs = ScalarExpr::binary(Op::mul, lhs, factor(), at);
            else if (accept('/'))
                lhs = ScalarExpr::binary(Op::div, lhs, factor(), at);
            else
                return lhs;
        }
    }

    // Unary minus binds looser than '^': -x^2 is -(x^2).
    ScalarExpr factor()
    {
        skip_ws();
        const long start = static_cast<long>(pos_);
        if (accept('-')) {
            ScalarExpr inner = factor();
            if (inner.is_constant()) return ScalarExpr::constant(-inner.constant_value(), start);
            return ScalarExpr::unary(Op::neg, inner, start);
        }
        ScalarExpr b = base();
        skip_ws();
        const long at = static_cast<long>(pos_);
        if (!accept('^')) return b;
        // the exponent is a (possibly negated, possibly parenthesized) numeric literal
        const bool paren = accept('(');
        const bool negative = accept('-');
        skip_ws();
        if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            fail("exponent must be a numeric constant");
        double v = number();
        if (paren) expect(')');
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') fail("chained exponents need parentheses");
        return ScalarExpr::power(b, negative ? -v : v, at);
    }

    ScalarExpr base()
    {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const long at = static_cast<long>(pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ScalarExpr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ScalarExpr::constant(number(), at);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string_view id = ident();
            for (const auto& f : kFunctions) {
                if (f.name != id) continue;
                if (!accept('(')) fail("function '" + std::string(id) + "' requires one argument");
                ScalarExpr arg = expr();
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',')
                    fail("function '" + std::string(id) + "' takes exactly one argument");
                expect(')');
                return ScalarExpr::unary(f.op, arg, at);
            }
            const auto it = std::find(coords_.begin(), coords_.end(), id);
            if (it == coords_.end()) {
                pos_ = static_cast<std::size_t>(at);
                fail("unknown identifier '" + std::string(id) + "'");
            }
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') fail("coordinate '" + std::string(id) + "' is not a function");
            return ScalarExpr::variable(static_cast<int>(it - coords_.begin()), at);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view ident()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    double number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    std::string_view text_;
    std::span<const std::string> coords_;
    std::size_t pos_ = 0;
};

int precedence(const ScalarExpr& e)
{
    switch (e.op()) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::pow: return 3;
    case Op::neg: return 4;
    case Op::constant: return e.constant_value() < 0 || std::signbit(e.constant_value()) ? 4 : 5;
    default: return 5;
    }
}

std::string function_name(Op op)
{
    for (const auto& f : kFunctions)
        if (f.op == op) return std::string(f.name);
    return "?";
}

void print(const ScalarExpr& e, std::span<const std::string> coords, std::string& out);

void print_wrapped(const ScalarExpr& e, bool wrap, std::span<const std::string> coords, std::string& out)
{
    if (wrap) out += '(';
    print(e, coords, out);
    if (wrap) out += ')';
}

void print(const ScalarExpr& e, std::span<const std::string> coords, std::string& out)
{
    switch (e.op()) {
    case Op::constant: {
        const double v = e.constant_value();
        if (std::signbit(v))
            out += "(-" + format_number(-v) + ")";
        else
            out += format_number(v);
        return;
    }
    case Op::variable: out += coords[e.variable_index()]; return;
    case Op::neg:
        out += "(-";
        print_wrapped(e.arg(0), precedence(e.arg(0)) < 5, coords, out);
        out += ')';
        return;
    case Op::pow: {
        print_wrapped(e.arg(0), precedence(e.arg(0)) < 4, coords, out);
        out += '^';
        const double x = e.arg(1).constant_value();
        out += std::signbit(x) ? "(-" + format_number(-x) + ")" : format_number(x);
        return;
    }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
        const int p = precedence(e);
        print_wrapped(e.arg(0), precedence(e.arg(0)) < p, coords, out);
        out += e.op() == Op::add ? " + " : e.op() == Op::sub ? " - " : e.op() == Op::mul ? "*" : "/";
        print_wrapped(e.arg(1), precedence(e.arg(1)) <= p, coords, out);
        return;
    }
    default:
        out += function_name(e.op()) + "(";
        print(e.arg(0), coords, out);
        out += ')';
    }
}

Jet eval_node(const ScalarExpr& e, std::span<const double> point, const MonomialBasis& basis, int order)
{
    try {
        switch (e.op()) {
        case Op::constant: return Jet(basis, order, e.constant_value());
        case Op::variable: return Jet::variable(basis, order, e.variable_index(), point[e.variable_index()]);
        case Op::neg: return -eval_node(e.arg(0), point, basis, order);
        case Op::sin: return sin(eval_node(e.arg(0), point, basis, order));
        case Op::cos: return cos(eval_node(e.arg(0), point, basis, order));
        case Op::tan: return tan(eval_node(e.arg(0), point, basis, order));
        case Op::exp: return exp(eval_node(e.arg(0), point, basis, order));
        case Op::log: return log(eval_node(e.arg(0), point, basis, order));
        case Op::sqrt: return sqrt(eval_node(e.arg(0), point, basis, order));
        case Op::pow: return pow(eval_node(e.arg(0), point, basis, order), e.arg(1).constant_value());
        case Op::add: return eval_node(e.arg(0), point, basis, order) + eval_node(e.arg(1), point, basis, order);
        case Op::sub: return eval_node(e.arg(0), point, basis, order) - eval_node(e.arg(1), point, basis, order);
        case Op::mul: return eval_node(e.arg(0), point, basis, order) * eval_node(e.arg(1), point, basis, order);
        case Op::div: return eval_node(e.arg(0), point, basis, order) / eval_node(e.arg(1), point, basis, order);
        }
    } catch (const DomainError& err) {
        if (err.offset() >= 0 || e.offset() < 0) throw;
        throw DomainError(err.what(), e.offset());
    }
    return Jet(basis, order);
}

}  // namespace

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ScalarExpr parse_expr(std::string_view text, std::span<const std::string> coord_names)
{
    return Parser(text, coord_names).parse();
}

std::string print_expr(const ScalarExpr& e, std::span<const std::string> coord_names)
{
    std::string out;
    print(e, coord_names, out);
    return out;
}

Jet eval_jet(const ScalarExpr& e, std::span<const double> point, int order)
{
    if (order < 0 || order > kMaxJetOrder) throw Error("jet order must be in 0..4");
    if (e.max_variable() >= static_cast<int>(point.size()))
        throw Error("expression references a coordinate outside the point's dimension");
    return eval_node(e, point, MonomialBasis::of(static_cast<int>(point.size())), order);
}

double eval(const ScalarExpr& e, std::span<const double> point) { return eval_jet(e, point, 0).value(); }

ScalarExpr remap_variables(const ScalarExpr& e, std::span<const int> mapping)
{
    switch (e.arity()) {
    case 0:
        if (e.op() == Op::variable) return ScalarExpr::variable(mapping[e.variable_index()], e.offset());
        return e;
    case 1: return ScalarExpr::unary(e.op(), remap_variables(e.arg(0), mapping), e.offset());
    default:
        return ScalarExpr::binary(e.op(), remap_variables(e.arg(0), mapping), remap_variables(e.arg(1), mapping),
                                  e.offset());
    }
}

}  // namespace curvlab
