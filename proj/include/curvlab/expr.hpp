#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/jet.hpp"

namespace curvlab {

/// Immutable expression tree over the coordinates of one chart. Nodes are shared,
/// so copies are cheap. `offset` records the source byte offset of a parsed node
/// (-1 for trees built in code) and is used to locate domain errors.
class ScalarExpr {
public:
    enum class Op { constant, variable, neg, sin, cos, tan, exp, log, sqrt, add, sub, mul, div, pow };

    ScalarExpr();  // the constant 0

    static ScalarExpr constant(double value, long offset = -1);
    static ScalarExpr variable(int index, long offset = -1);
    static ScalarExpr unary(Op op, ScalarExpr arg, long offset = -1);
    static ScalarExpr binary(Op op, ScalarExpr lhs, ScalarExpr rhs, long offset = -1);
    /// base ^ exponent; the exponent is stored as a constant node.
    static ScalarExpr power(ScalarExpr base, double exponent, long offset = -1);

    Op op() const noexcept;
    double constant_value() const noexcept;
    int variable_index() const noexcept;
    const ScalarExpr& arg(int i) const noexcept;
    long offset() const noexcept;
    int arity() const noexcept;

    /// Largest variable index referenced, or -1 for a closed expression.
    int max_variable() const;
    bool is_constant() const noexcept { return op() == Op::constant; }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::add, a, b); }
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::sub, a, b); }
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::mul, a, b); }
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::div, a, b); }
    friend ScalarExpr operator-(const ScalarExpr& a) { return unary(Op::neg, a); }

private:
    struct Node;
    explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct ScalarExpr::Node {
    Op op = Op::constant;
    double value = 0.0;
    int var = -1;
    // leaf children are empty handles, never dereferenced
    std::array<ScalarExpr, 2> args{ScalarExpr(std::shared_ptr<const Node>{}), ScalarExpr(std::shared_ptr<const Node>{})};
    long offset = -1;
};

inline ScalarExpr::Op ScalarExpr::op() const noexcept { return node_->op; }
inline double ScalarExpr::constant_value() const noexcept { return node_->value; }
inline int ScalarExpr::variable_index() const noexcept { return node_->var; }
inline const ScalarExpr& ScalarExpr::arg(int i) const noexcept { return node_->args[i]; }
inline long ScalarExpr::offset() const noexcept { return node_->offset; }

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

/// Recursive-descent parser for
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' number)?
///   base   := number | ident | ident '(' expr ')' | '(' expr ')'
/// Function identifiers: sin cos tan exp log sqrt. Other identifiers must be coordinate names.
/// A negated numeric literal folds into a single constant node.
ScalarExpr parse_expr(std::string_view text, std::span<const std::string> coord_names);

/// Inverse of parse_expr: parse_expr(print_expr(e)) is structurally equal to e for parsed trees.
std::string print_expr(const ScalarExpr& e, std::span<const std::string> coord_names);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// Exact Taylor jet of `e` at `point` (dimension = point.size()).
Jet eval_jet(const ScalarExpr& e, std::span<const double> point, int order);
double eval(const ScalarExpr& e, std::span<const double> point);

/// Rename variables: variable i becomes variable mapping[i].
ScalarExpr remap_variables(const ScalarExpr& e, std::span<const int> mapping);

}  // namespace curvlab
