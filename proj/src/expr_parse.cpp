#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"

namespace gaugekit::expr {
namespace {

struct FunctionSpec {
    std::string_view name;
    Op op;
    int arity;
};

constexpr FunctionSpec kFunctions[] = {
    {"sin", Op::Sin, 1},  {"cos", Op::Cos, 1}, {"exp", Op::Exp, 1}, {"log", Op::Log, 1},
    {"sqrt", Op::Sqrt, 1}, {"abs", Op::Abs, 1}, {"min", Op::Min, 2}, {"max", Op::Max, 2},
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run()
    {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("operator or end of input");
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::string expected) const { throw ParseError(pos_, std::move(expected)); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("'") + c + "'");
        }
    }

    Expr expression()
    {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Op::Add, lhs, term());
            }
            else if (accept('-')) {
                lhs = Expr::binary(Op::Sub, lhs, term());
            }
            else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Op::Mul, lhs, unary());
            }
            else if (accept('/')) {
                lhs = Expr::binary(Op::Div, lhs, unary());
            }
            else {
                return lhs;
            }
        }
    }

    Expr unary()
    {
        if (accept('-')) {
            return Expr::unary(Op::Neg, unary());
        }
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) {
            return Expr::power(base, exponent());
        }
        return base;
    }

    int exponent()
    {
        if (accept('-')) {
            return -integer();
        }
        if (accept('(')) {
            const bool negative = accept('-');
            const int v = integer();
            expect(')');
            return negative ? -v : v;
        }
        const std::size_t start = pos_;
        const int base = integer();
        if (!accept('^')) {
            return base;
        }
        const std::size_t rhs_pos = pos_;
        const int rhs = exponent();
        if (rhs < 0) {
            pos_ = rhs_pos;
            fail("non-negative exponent in a chained power");
        }
        long long acc = 1;
        for (int i = 0; i < rhs; ++i) {
            acc *= base;
            if (acc > std::numeric_limits<int>::max() || acc < std::numeric_limits<int>::min()) {
                pos_ = start;
                fail("exponent that fits in an int");
            }
        }
        return static_cast<int>(acc);
    }

    int integer()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            ++pos_;
        }
        if (start == pos_) {
            fail("integer exponent");
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
            fail("integer exponent");
        }
        int v = 0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{}) {
            pos_ = start;
            fail("exponent that fits in an int");
        }
        return v;
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                ++pos_;
            }
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) {
                ++q;
            }
            if (q < text_.size() && is_digit(text_[q])) {
                while (q < text_.size() && is_digit(text_[q])) {
                    ++q;
                }
                pos_ = q;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_ || !std::isfinite(v)) {
            pos_ = start;
            fail("finite number");
        }
        return Expr::number(v);
    }

    Expr primary()
    {
        const char c = peek();
        if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
            return number();
        }
        if (c == '(') {
            ++pos_;
            Expr inner = expression();
            expect(')');
            return inner;
        }
        if (is_ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x") {
                return Expr::variable();
            }
            if (name == "pi") {
                return Expr::constant(Op::Pi);
            }
            if (name == "e") {
                return Expr::constant(Op::E);
            }
            for (const auto& fn : kFunctions) {
                if (fn.name == name) {
                    return call(fn);
                }
            }
            pos_ = start;
            fail("x, pi, e or a function name");
        }
        fail("number, x, constant, function or '('");
    }

    Expr call(const FunctionSpec& fn)
    {
        expect('(');
        Expr first = expression();
        if (fn.arity == 2) {
            expect(',');
            Expr second = expression();
            expect(')');
            return Expr::binary(fn.op, first, second);
        }
        expect(')');
        return Expr::unary(fn.op, first);
    }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace gaugekit::expr
