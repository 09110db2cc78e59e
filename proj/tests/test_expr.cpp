#include <doctest.h>

#include <cmath>
#include <random>

#include "curvlab/error.hpp"
#include "support.hpp"

using namespace testing;
using Op = ScalarExpr::Op;

TEST_CASE("t^2 parses to a power of a variable")
{
    const ScalarExpr e = expr("t^2", {"t"});
    REQUIRE(e.op() == Op::pow);
    CHECK(e.arg(0).op() == Op::variable);
    CHECK(e.arg(0).variable_index() == 0);
    CHECK(e.arg(1).constant_value() == 2.0);
}

TEST_CASE("sin(x)*cos(y) parses to a product of two calls")
{
    const ScalarExpr e = expr("sin(x)*cos(y)", {"x", "y"});
    REQUIRE(e.op() == Op::mul);
    CHECK(e.arg(0).op() == Op::sin);
    CHECK(e.arg(1).op() == Op::cos);
    CHECK(e.arg(1).arg(0).variable_index() == 1);
}

TEST_CASE("a negated literal folds into one constant")
{
    const ScalarExpr e = expr("-1", {"t"});
    REQUIRE(e.is_constant());
    CHECK(e.constant_value() == -1.0);
}

TEST_CASE("unary minus binds looser than the power operator")
{
    const std::vector<std::string> c{"x"};
    const std::vector<double> p{3.0};
    CHECK(eval(expr("-x^2", c), p) == doctest::Approx(-9.0));
    CHECK(eval(expr("-2^2", c), p) == doctest::Approx(-4.0));
    CHECK(eval(expr("(-2)^2", c), p) == doctest::Approx(4.0));
    CHECK(eval(expr("x^-1", c), p) == doctest::Approx(1.0 / 3.0));
    CHECK(eval(expr("2*-x", c), p) == doctest::Approx(-6.0));
    CHECK(eval(expr("1 - -x", c), p) == doctest::Approx(4.0));
}

TEST_CASE("operator precedence and associativity")
{
    const std::vector<std::string> c{"x", "y"};
    const std::vector<double> p{2.0, 3.0};
    CHECK(eval(expr("x - y - 1", c), p) == doctest::Approx(-2.0));
    CHECK(eval(expr("x / y / 2", c), p) == doctest::Approx(1.0 / 3.0));
    CHECK(eval(expr("x + y*x^2", c), p) == doctest::Approx(14.0));
    CHECK(eval(expr("1e-3*x + .5", c), p) == doctest::Approx(0.502));
}

TEST_CASE("print then parse gives a structurally equal tree")
{
    const std::vector<std::string> c{"t", "x", "th"};
    const char* corpus[] = {
        "t^2",
        "-1",
        "-x^2",
        "(-x)^2",
        "(-2)^3",
        "sin(th)^2*(1 + t^2)",
        "exp(2*t)/(1 - x/(2 + th))",
        "x - (t - th)",
        "x/(t*th)",
        "sqrt(1 + x^2)^(-1.5)",
        "log(2 + cos(t))*tan(x/4)",
        "-(t + x)*-th",
        "0.1 + 1e-12 - 3.25e+7",
        "((x))",
    };
    for (const char* text : corpus) {
        CAPTURE(text);
        const ScalarExpr e = expr(text, c);
        const std::string printed = print_expr(e, c);
        CAPTURE(printed);
        CHECK(structurally_equal(expr(printed, c), e));
        CHECK(print_expr(expr(printed, c), c) == printed);
    }
}

TEST_CASE("format_number round-trips doubles")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(3.0) == "3");
}

TEST_CASE("syntax errors carry the byte offset")
{
    const std::vector<std::string> c{"x", "y"};
    const auto offset_of = [&](const char* text) -> long {
        try {
            parse_expr(text, c);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    CHECK(offset_of("x^y") == 2);
    CHECK(offset_of("foo(x)") == 0);
    CHECK(offset_of("x + z") == 4);
    CHECK(offset_of("(x") == 2);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("x+") == 2);
    CHECK(offset_of("2x") == 1);
    CHECK(offset_of("sin x") >= 3);
    CHECK(offset_of("sin(x, y)") == 5);
    CHECK(offset_of("x(y)") >= 1);
    CHECK(offset_of("x^2^3") >= 3);
    CHECK(offset_of("x y") == 2);
}

TEST_CASE("domain errors name the offending node")
{
    const std::vector<std::string> c{"x"};
    const std::vector<double> p{0.5};
    const auto offset_of = [&](const char* text) -> long {
        try {
            eval(expr(text, c), p);
        } catch (const DomainError& e) {
            return e.offset();
        }
        return -100;
    };
    CHECK(offset_of("1 + log(x - 1)") == 4);
    CHECK(offset_of("sqrt(-x)") == 0);
    CHECK(offset_of("x/(x - 0.5)") == 1);
    CHECK(offset_of("2*x^-1 + (x-0.5)^(-2)") == 16);
    CHECK(offset_of("x") == -100);
    CHECK_THROWS_AS(eval_jet(expr("log(x - 1)", c), p, 2), DomainError);
}

TEST_CASE("remapping variables relabels a tree")
{
    const ScalarExpr e = expr("a*b^2", {"a", "b"});
    const std::vector<int> mapping{2, 0};
    const ScalarExpr r = remap_variables(e, mapping);
    const std::vector<double> p{3.0, 0.0, 2.0};
    CHECK(eval(r, p) == doctest::Approx(2.0 * 9.0));
    CHECK(r.max_variable() == 2);
}
