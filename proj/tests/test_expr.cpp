#include <doctest.h>

#include <cmath>
#include <random>

#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace gaugekit;
using namespace gaugekit::expr;

TEST_CASE("parse and print")
{
    CHECK(to_string(parse("x^2 - 2")) == "x^2 - 2");
    CHECK(to_string(parse("  sin( x )*2 ")) == "sin(x)*2");
    CHECK(to_string(parse("2*-x")) == "2*-x");
    CHECK(to_string(parse("(x - 1) - (x - 1)")) == "x - 1 - (x - 1)");
    CHECK(to_string(parse("x^(-2)")) == "x^-2");
    CHECK(to_string(parse("-x^2")) == "-x^2");
    CHECK(to_string(parse("(-x)^2")) == "(-x)^2");
    CHECK(to_string(parse("min(x, 1)")) == "min(x, 1)");
    CHECK(to_string(parse("1e-3*x")) == "0.001*x");

    CHECK(parse("x^2 - 2").node().op == Op::Sub);
    CHECK(parse("2^3^2")(0.0) == 512.0);
    CHECK(parse("pi")(0.0) == M_PI);
    CHECK(parse("e")(0.0) == M_E);
}

TEST_CASE("parse errors carry a position")
{
    try {
        parse("sin(x");
        FAIL("expected ParseError");
    }
    catch (const ParseError& err) {
        CHECK(err.position == 5);
        CHECK(err.expected == "')'");
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x +"), ParseError);
    CHECK_THROWS_AS(parse("x^1.5"), ParseError);
    CHECK_THROWS_AS(parse("y"), ParseError);
    CHECK_THROWS_AS(parse("min(x)"), ParseError);
    CHECK_THROWS_AS(parse("x x"), ParseError);
    CHECK_THROWS_AS(parse("1e999"), ParseError);
}

TEST_CASE("eval")
{
    CHECK(eval(parse("x^2 - 2"), 3.0) == 7.0);
    CHECK(eval(parse("abs(x) + max(x, 2)"), -3.0) == 5.0);
    CHECK(eval(parse("sqrt(x)"), 4.0) == 2.0);
    CHECK_THROWS_AS(eval(parse("log(x)"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("sqrt(x)"), -1.0), DomainError);
    CHECK_THROWS_AS(eval(parse("1/x"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("x^-1"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("exp(x)"), 1000.0), DomainError);
}

TEST_CASE("eval_interval examples")
{
    const Interval sq = eval_interval(parse("x^2"), Interval(1, 2));
    CHECK(sq.lo() <= 1.0);
    CHECK(sq.hi() >= 4.0);
    CHECK(sq.lo() >= std::nextafter(1.0, 0.0));
    CHECK(sq.hi() <= std::nextafter(4.0, 5.0));

    const Interval diff = eval_interval(parse("x - x"), Interval(0, 1));
    CHECK(diff.contains(Interval(-1, 1)));

    const Interval s = eval_interval(parse("sin(x)"), Interval(0, 3.2));
    CHECK(s.hi() >= 1.0);
    CHECK(s.lo() <= std::sin(3.2));

    const Interval even = eval_interval(parse("x^2"), Interval(-1, 2));
    CHECK(even.lo() <= 0.0);
    CHECK(even.hi() >= 4.0);

    CHECK_THROWS_AS(eval_interval(parse("1/x"), Interval(-1, 1)), DomainError);
    CHECK_THROWS_AS(eval_interval(parse("log(x)"), Interval(0, 1)), DomainError);
}

TEST_CASE("differentiate")
{
    CHECK(to_string(differentiate(parse("sin(x)"))) == "cos(x)");
    CHECK(to_string(differentiate(parse("x^3"))) == "3*x^2");
    CHECK(to_string(differentiate(parse("x"))) == "1");
    CHECK(to_string(differentiate(parse("5"))) == "0");
    CHECK_THROWS_AS(differentiate(parse("abs(x)")), NotDifferentiable);
    CHECK_THROWS_AS(differentiate(parse("min(x, 1)")), NotDifferentiable);
}

TEST_CASE("lipschitz_bound")
{
    const double L = lipschitz_bound(parse("x^3 - x"), Interval(-2, 2));
    CHECK(L >= 11.0);
    CHECK(L <= 11.11);
    CHECK(lipschitz_bound(parse("sin(x)"), Interval(0, 1)) >= 1.0);
    CHECK(lipschitz_bound(parse("3"), Interval(0, 1)) == kLipschitzFloor);
    CHECK_THROWS_AS(lipschitz_bound(parse("abs(x)"), Interval(0, 1)), NotDifferentiable);
}

TEST_CASE("enclosures contain point values")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Expr e = gen::random_expr(rng, 4);
        double lo = coord(rng);
        double hi = lo + 2 * unit(rng);
        const double x = lo + (hi - lo) * unit(rng);
        const Interval enc = eval_interval(e, Interval(lo, hi));
        const double v = eval(e, x);
        INFO(to_string(e), " on [", lo, ", ", hi, "] at ", x);
        CHECK(enc.contains(v));
    }
}

TEST_CASE("derivatives match central differences")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const Expr e = gen::random_smooth(rng, 3);
        const Expr d = differentiate(e);
        const double x = coord(rng);
        const double exact = eval(d, x);
        const double approx = oracle::central_difference([&](double t) { return eval(e, t); }, x);
        if (std::abs(exact) > 1e6) {
            continue;
        }
        ++compared;
        INFO(to_string(e), " -> ", to_string(d), " at ", x);
        CHECK(std::abs(exact - approx) <= 1e-5 * (1 + std::abs(exact)));
    }
    CHECK(compared > 400);
}

TEST_CASE("lipschitz bound dominates sampled slopes")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Expr e = gen::random_smooth(rng, 3);
        const double lo = coord(rng);
        const double hi = lo + 0.1 + unit(rng);
        const double L = lipschitz_bound(e, Interval(lo, hi));
        for (int k = 0; k < 20; ++k) {
            const double x1 = lo + (hi - lo) * unit(rng);
            const double x2 = lo + (hi - lo) * unit(rng);
            if (x1 == x2) {
                continue;
            }
            const double slope = std::abs(eval(e, x1) - eval(e, x2)) / std::abs(x1 - x2);
            INFO(to_string(e), " on [", lo, ", ", hi, "]");
            CHECK(slope <= L * (1 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("print/parse round trip")
{
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 2000; ++trial) {
        const Expr e = gen::random_expr(rng, 5);
        const std::string text = to_string(e);
        INFO(text);
        CHECK(parse(text) == e);
    }
}
