#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"

namespace gaugekit::expr {
namespace {

bool is_number(const Expr& e, double v) { return e.node().op == Op::Number && e.node().value == v; }
bool is_number(const Expr& e) { return e.node().op == Op::Number; }
double value(const Expr& e) { return e.node().value; }

// Constructors that fold literal arithmetic and the neutral elements 0 and 1.
Expr add(Expr a, Expr b)
{
    if (is_number(a) && is_number(b)) {
        return Expr::number(value(a) + value(b));
    }
    if (is_number(a, 0.0)) {
        return b;
    }
    if (is_number(b, 0.0)) {
        return a;
    }
    return Expr::binary(Op::Add, a, b);
}

Expr neg(Expr a)
{
    if (is_number(a)) {
        return Expr::number(-value(a));
    }
    return Expr::unary(Op::Neg, a);
}

Expr sub(Expr a, Expr b)
{
    if (is_number(a) && is_number(b)) {
        return Expr::number(value(a) - value(b));
    }
    if (is_number(b, 0.0)) {
        return a;
    }
    if (is_number(a, 0.0)) {
        return neg(b);
    }
    return Expr::binary(Op::Sub, a, b);
}

Expr mul(Expr a, Expr b)
{
    if (is_number(a) && is_number(b)) {
        return Expr::number(value(a) * value(b));
    }
    if (is_number(a, 0.0) || is_number(b, 0.0)) {
        return Expr::number(0.0);
    }
    if (is_number(a, 1.0)) {
        return b;
    }
    if (is_number(b, 1.0)) {
        return a;
    }
    return Expr::binary(Op::Mul, a, b);
}

Expr div(Expr a, Expr b)
{
    if (is_number(a) && is_number(b) && value(b) != 0.0) {
        return Expr::number(value(a) / value(b));
    }
    if (is_number(a, 0.0)) {
        return Expr::number(0.0);
    }
    if (is_number(b, 1.0)) {
        return a;
    }
    return Expr::binary(Op::Div, a, b);
}

Expr pow(Expr base, int k)
{
    if (k == 0) {
        return Expr::number(1.0);
    }
    if (k == 1) {
        return base;
    }
    return Expr::power(base, k);
}

Expr d(const Expr& e)
{
    const Node& n = e.node();
    auto arg = [&](std::size_t i) { return Expr(n.args[i]); };
    switch (n.op) {
    case Op::Number:
    case Op::Pi:
    case Op::E: return Expr::number(0.0);
    case Op::Var: return Expr::number(1.0);
    case Op::Neg: return neg(d(arg(0)));
    case Op::Add: return add(d(arg(0)), d(arg(1)));
    case Op::Sub: return sub(d(arg(0)), d(arg(1)));
    case Op::Mul: {
        const Expr u = arg(0);
        const Expr v = arg(1);
        return add(mul(d(u), v), mul(u, d(v)));
    }
    case Op::Div: {
        const Expr u = arg(0);
        const Expr v = arg(1);
        return div(sub(mul(d(u), v), mul(u, d(v))), pow(v, 2));
    }
    case Op::Pow: {
        const Expr u = arg(0);
        if (n.exponent == 0) {
            return Expr::number(0.0);
        }
        return mul(mul(Expr::number(n.exponent), pow(u, n.exponent - 1)), d(u));
    }
    case Op::Sin: return mul(Expr::unary(Op::Cos, arg(0)), d(arg(0)));
    case Op::Cos: return mul(neg(Expr::unary(Op::Sin, arg(0))), d(arg(0)));
    case Op::Exp: return mul(e, d(arg(0)));
    case Op::Log: return div(d(arg(0)), arg(0));
    case Op::Sqrt: return div(d(arg(0)), mul(Expr::number(2.0), e));
    case Op::Abs:
    case Op::Min:
    case Op::Max: throw NotDifferentiable(to_string(e));
    }
    return Expr::number(0.0);
}

}  // namespace

Expr differentiate(const Expr& e) { return d(e); }

}  // namespace gaugekit::expr
