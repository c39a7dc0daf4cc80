#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"

namespace gaugekit::expr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string text_of(const Node& n) { return to_string(Expr(std::shared_ptr<const Node>(&n, [](const Node*) {}))); }

double checked(const Node& n, double x, double v)
{
    if (!std::isfinite(v)) {
        throw DomainError(text_of(n), x, "non-finite result");
    }
    return v;
}

double eval_node(const Node& n, double x)
{
    switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Pi: return std::numbers::pi;
    case Op::E: return std::numbers::e;
    case Op::Neg: return -eval_node(*n.args[0], x);
    case Op::Add: return checked(n, x, eval_node(*n.args[0], x) + eval_node(*n.args[1], x));
    case Op::Sub: return checked(n, x, eval_node(*n.args[0], x) - eval_node(*n.args[1], x));
    case Op::Mul: return checked(n, x, eval_node(*n.args[0], x) * eval_node(*n.args[1], x));
    case Op::Div: {
        const double num = eval_node(*n.args[0], x);
        const double den = eval_node(*n.args[1], x);
        if (den == 0.0) {
            throw DomainError(text_of(n), x, "division by zero");
        }
        return checked(n, x, num / den);
    }
    case Op::Pow: {
        const double base = eval_node(*n.args[0], x);
        if (base == 0.0 && n.exponent < 0) {
            throw DomainError(text_of(n), x, "negative power of zero");
        }
        return checked(n, x, std::pow(base, n.exponent));
    }
    case Op::Sin: return std::sin(eval_node(*n.args[0], x));
    case Op::Cos: return std::cos(eval_node(*n.args[0], x));
    case Op::Exp: return checked(n, x, std::exp(eval_node(*n.args[0], x)));
    case Op::Log: {
        const double a = eval_node(*n.args[0], x);
        if (!(a > 0.0)) {
            throw DomainError(text_of(n), x, "log of a non-positive number");
        }
        return std::log(a);
    }
    case Op::Sqrt: {
        const double a = eval_node(*n.args[0], x);
        if (a < 0.0) {
            throw DomainError(text_of(n), x, "sqrt of a negative number");
        }
        return std::sqrt(a);
    }
    case Op::Abs: return std::abs(eval_node(*n.args[0], x));
    case Op::Min: return std::min(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    case Op::Max: return std::max(eval_node(*n.args[0], x), eval_node(*n.args[1], x));
    }
    return 0.0;
}

// Enclosures are carried as raw endpoint pairs; the Interval type is only
// built at the boundary so intermediate infinities can be reported cleanly.
struct Box {
    double lo;
    double hi;
};

double down(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

Box widen(Box b) { return {down(b.lo), up(b.hi)}; }

Box finite_or_throw(const Node& n, const Box& iv, Box b)
{
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
        throw DomainError(text_of(n), iv.lo, "non-finite enclosure");
    }
    return b;
}

Box pow_box(Box b, int k)
{
    // k > 0
    const double plo = std::pow(b.lo, k);
    const double phi = std::pow(b.hi, k);
    if (k % 2 == 1 || b.lo >= 0.0) {
        return widen({std::min(plo, phi), std::max(plo, phi)});
    }
    if (b.hi <= 0.0) {
        return {std::max(0.0, down(phi)), up(plo)};
    }
    return {0.0, up(std::max(plo, phi))};
}

// Is some point offset + 2*pi*k inside [lo, hi]? Errs on the side of "yes".
bool hits_phase(double lo, double hi, double offset)
{
    constexpr double period = 2 * std::numbers::pi;
    const double k0 = std::floor((lo - offset) / period);
    for (double k = k0 - 1; k <= k0 + 2; k += 1) {
        const double c = offset + k * period;
        const double slack = 64 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(c));
        if (c + slack >= lo && c - slack <= hi) {
            return true;
        }
    }
    return false;
}

// Range of sin (phase 0) or cos (phase pi/2 shift) over [lo, hi].
Box trig_box(Box b, bool is_cos)
{
    if (b.hi - b.lo >= 2 * std::numbers::pi) {
        return {-1.0, 1.0};
    }
    const double max_at = is_cos ? 0.0 : std::numbers::pi / 2;
    const double min_at = is_cos ? std::numbers::pi : -std::numbers::pi / 2;
    const double va = is_cos ? std::cos(b.lo) : std::sin(b.lo);
    const double vb = is_cos ? std::cos(b.hi) : std::sin(b.hi);
    Box out = widen({std::min(va, vb), std::max(va, vb)});
    if (hits_phase(b.lo, b.hi, max_at)) {
        out.hi = 1.0;
    }
    if (hits_phase(b.lo, b.hi, min_at)) {
        out.lo = -1.0;
    }
    out.lo = std::max(out.lo, -1.0);
    out.hi = std::min(out.hi, 1.0);
    return out;
}

Box enclose(const Node& n, const Box& iv)
{
    switch (n.op) {
    case Op::Number: return {n.value, n.value};
    case Op::Var: return iv;
    case Op::Pi: return widen({std::numbers::pi, std::numbers::pi});
    case Op::E: return widen({std::numbers::e, std::numbers::e});
    case Op::Neg: {
        const Box a = enclose(*n.args[0], iv);
        return {-a.hi, -a.lo};
    }
    case Op::Add: {
        const Box a = enclose(*n.args[0], iv);
        const Box b = enclose(*n.args[1], iv);
        return finite_or_throw(n, iv, widen({a.lo + b.lo, a.hi + b.hi}));
    }
    case Op::Sub: {
        const Box a = enclose(*n.args[0], iv);
        const Box b = enclose(*n.args[1], iv);
        return finite_or_throw(n, iv, widen({a.lo - b.hi, a.hi - b.lo}));
    }
    case Op::Mul: {
        const Box a = enclose(*n.args[0], iv);
        const Box b = enclose(*n.args[1], iv);
        const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        return finite_or_throw(n, iv, widen({*std::min_element(p, p + 4), *std::max_element(p, p + 4)}));
    }
    case Op::Div: {
        const Box a = enclose(*n.args[0], iv);
        const Box b = enclose(*n.args[1], iv);
        if (b.lo <= 0.0 && 0.0 <= b.hi) {
            throw DomainError(text_of(n), iv.lo, "divisor enclosure contains zero");
        }
        const double q[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
        return finite_or_throw(n, iv, widen({*std::min_element(q, q + 4), *std::max_element(q, q + 4)}));
    }
    case Op::Pow: {
        const Box a = enclose(*n.args[0], iv);
        if (n.exponent == 0) {
            return {1.0, 1.0};
        }
        if (n.exponent > 0) {
            return finite_or_throw(n, iv, pow_box(a, n.exponent));
        }
        if (a.lo <= 0.0 && 0.0 <= a.hi) {
            throw DomainError(text_of(n), iv.lo, "negative power of an enclosure containing zero");
        }
        const Box p = pow_box(a, -n.exponent);
        return finite_or_throw(n, iv, widen({std::min(1.0 / p.lo, 1.0 / p.hi), std::max(1.0 / p.lo, 1.0 / p.hi)}));
    }
    case Op::Sin: return trig_box(enclose(*n.args[0], iv), false);
    case Op::Cos: return trig_box(enclose(*n.args[0], iv), true);
    case Op::Exp: {
        const Box a = enclose(*n.args[0], iv);
        return finite_or_throw(n, iv, {std::max(0.0, down(std::exp(a.lo))), up(std::exp(a.hi))});
    }
    case Op::Log: {
        const Box a = enclose(*n.args[0], iv);
        if (!(a.lo > 0.0)) {
            throw DomainError(text_of(n), iv.lo, "log of an enclosure reaching zero or below");
        }
        return widen({std::log(a.lo), std::log(a.hi)});
    }
    case Op::Sqrt: {
        const Box a = enclose(*n.args[0], iv);
        if (a.lo < 0.0) {
            throw DomainError(text_of(n), iv.lo, "sqrt of an enclosure reaching below zero");
        }
        return {std::max(0.0, down(std::sqrt(a.lo))), up(std::sqrt(a.hi))};
    }
    case Op::Abs: {
        const Box a = enclose(*n.args[0], iv);
        if (a.lo >= 0.0) {
            return a;
        }
        if (a.hi <= 0.0) {
            return {-a.hi, -a.lo};
        }
        return {0.0, std::max(-a.lo, a.hi)};
    }
    case Op::Min:
    case Op::Max: {
        const Box a = enclose(*n.args[0], iv);
        const Box b = enclose(*n.args[1], iv);
        if (n.op == Op::Min) {
            return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
        }
        return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
    }
    }
    return iv;
}

}  // namespace

double eval(const Expr& e, double x) { return eval_node(e.node(), x); }

Interval eval_interval(const Expr& e, const Interval& iv)
{
    const Box b = enclose(e.node(), {iv.lo(), iv.hi()});
    return Interval(b.lo, b.hi);
}

double lipschitz_bound(const Expr& e, const Interval& iv, double floor)
{
    const Interval d = eval_interval(differentiate(e), iv);
    return std::max({std::abs(d.lo()), std::abs(d.hi()), floor});
}

}  // namespace gaugekit::expr
