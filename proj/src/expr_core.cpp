#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"

namespace gaugekit::expr {
namespace {

int arity(Op op)
{
    switch (op) {
    case Op::Number:
    case Op::Var:
    case Op::Pi:
    case Op::E: return 0;
    case Op::Neg:
    case Op::Pow:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
    case Op::Abs: return 1;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Min:
    case Op::Max: return 2;
    }
    return -1;
}

const char* function_name(Op op)
{
    switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return nullptr;
    }
}

// Binding strength used by the printer; mirrors the grammar levels.
int precedence(const Node& n)
{
    switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void print(const Node& n, std::string& out);

void print_child(const Node& child, bool parens, std::string& out)
{
    if (parens) {
        out += '(';
    }
    print(child, out);
    if (parens) {
        out += ')';
    }
}

void print(const Node& n, std::string& out)
{
    switch (n.op) {
    case Op::Number:
        if (std::signbit(n.value)) {
            out += '(';
            out += format_number(n.value);
            out += ')';
        }
        else {
            out += format_number(n.value);
        }
        return;
    case Op::Var: out += 'x'; return;
    case Op::Pi: out += "pi"; return;
    case Op::E: out += 'e'; return;
    case Op::Neg:
        out += '-';
        print_child(*n.args[0], precedence(*n.args[0]) < 3, out);
        return;
    case Op::Pow:
        print_child(*n.args[0], precedence(*n.args[0]) < 5, out);
        out += '^';
        out += std::to_string(n.exponent);
        return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
        const int p = precedence(n);
        print_child(*n.args[0], precedence(*n.args[0]) < p, out);
        switch (n.op) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
        }
        print_child(*n.args[1], precedence(*n.args[1]) <= p, out);
        return;
    }
    default:
        out += function_name(n.op);
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            print(*n.args[i], out);
        }
        out += ')';
        return;
    }
}

bool equal(const Node& a, const Node& b)
{
    if (&a == &b) {
        return true;
    }
    if (a.op != b.op || a.args.size() != b.args.size()) {
        return false;
    }
    if (a.op == Op::Number && a.value != b.value) {
        return false;
    }
    if (a.op == Op::Pow && a.exponent != b.exponent) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!equal(*a.args[i], *b.args[i])) {
            return false;
        }
    }
    return true;
}

NodePtr make(Op op, std::vector<NodePtr> args, double value = 0.0, int exponent = 0)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->exponent = exponent;
    n->args = std::move(args);
    return n;
}

}  // namespace

Expr::Expr(NodePtr root) : root_(std::move(root))
{
    if (!root_) {
        throw std::invalid_argument("null expression node");
    }
    if (static_cast<int>(root_->args.size()) != arity(root_->op)) {
        throw std::invalid_argument("expression node has wrong arity");
    }
}

Expr Expr::number(double v) { return Expr(make(Op::Number, {}, v)); }

Expr Expr::variable() { return Expr(make(Op::Var, {})); }

Expr Expr::constant(Op which)
{
    if (which != Op::Pi && which != Op::E) {
        throw std::invalid_argument("named constant must be pi or e");
    }
    return Expr(make(which, {}));
}

Expr Expr::unary(Op op, Expr arg)
{
    if (arity(op) != 1 || op == Op::Pow) {
        throw std::invalid_argument("not a unary operator");
    }
    return Expr(make(op, {arg.ptr()}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs)
{
    if (arity(op) != 2) {
        throw std::invalid_argument("not a binary operator");
    }
    return Expr(make(op, {lhs.ptr(), rhs.ptr()}));
}

Expr Expr::power(Expr base, int exponent) { return Expr(make(Op::Pow, {base.ptr()}, 0.0, exponent)); }

double Expr::operator()(double x) const { return eval(*this, x); }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

std::string to_string(const Expr& e)
{
    std::string out;
    print(e.node(), out);
    return out;
}

}  // namespace gaugekit::expr
