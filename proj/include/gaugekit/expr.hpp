#pragma once

// Univariate expression language used to describe functions and gauges.
//
// Grammar (whitespace is insignificant):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := int ('^' exponent)? | '-' int | '(' '-'? int ')'
//   primary  := number | 'x' | 'pi' | 'e' | func '(' args ')' | '(' expr ')'
//   func     := sin | cos | exp | log | sqrt | abs | min | max
//
// Exponents are integer literals only; `min` and `max` take two arguments,
// every other function takes one.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gaugekit/interval.hpp"

namespace gaugekit::expr {

enum class Op {
    Number,
    Var,
    Pi,
    E,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Min,
    Max,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::Number;
    double value = 0.0;  // Number only
    int exponent = 0;    // Pow only
    std::vector<NodePtr> args;
};

// Immutable handle to an expression tree. Copies share structure.
class Expr {
public:
    explicit Expr(NodePtr root);

    static Expr number(double v);
    static Expr variable();
    static Expr constant(Op which);  // Op::Pi or Op::E
    static Expr unary(Op op, Expr arg);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr power(Expr base, int exponent);

    const Node& node() const noexcept { return *root_; }
    const NodePtr& ptr() const noexcept { return root_; }

    double operator()(double x) const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    NodePtr root_;
};

Expr parse(std::string_view text);

// Prints with the minimal parentheses needed so that parse(to_string(e)) == e
// for every tree the parser can produce.
std::string to_string(const Expr& e);

double eval(const Expr& e, double x);

// Enclosure of { eval(e, x) : x in iv }, widened by one ulp per operation.
Interval eval_interval(const Expr& e, const Interval& iv);

// Symbolic derivative with respect to x; folds constants and trivial
// identities (x*1, x+0, u^1) but performs no other simplification.
Expr differentiate(const Expr& e);

inline constexpr double kLipschitzFloor = 1e-300;

// max |f'| over iv from an interval enclosure of the derivative.
double lipschitz_bound(const Expr& e, const Interval& iv, double floor = kLipschitzFloor);

}  // namespace gaugekit::expr
