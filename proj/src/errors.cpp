#include "gaugekit/errors.hpp"

#include <sstream>

namespace gaugekit {
namespace {

std::string describe(const char* prefix, double a)
{
    std::ostringstream os;
    os.precision(17);
    os << prefix << a;
    return os.str();
}

}  // namespace

GaugeNonpositive::GaugeNonpositive(double x, double value)
    : Error(describe("gauge is not positive at x = ", x) + describe(" (value ", value) + ")"),
      x(x),
      value(value)
{
}

ParseError::ParseError(std::size_t position, std::string expected)
    : Error("parse error at byte " + std::to_string(position) + ": expected " + expected),
      position(position),
      expected(std::move(expected))
{
}

DomainError::DomainError(std::string node, double x, const std::string& what)
    : Error(what + " in '" + node + "'" + describe(" at x = ", x)), node(std::move(node)), x(x)
{
}

NotDifferentiable::NotDifferentiable(std::string node)
    : Error("not differentiable: '" + node + "'"), node(std::move(node))
{
}

TargetHitExactly::TargetHitExactly(double s)
    : Error(describe("target value attained exactly at s = ", s)), s(s)
{
}

BoundViolated::BoundViolated(double s, double fs, double bound)
    : Error(describe("bound ", bound) + describe(" violated at s = ", s) + describe(", f(s) = ", fs)),
      s(s),
      fs(fs)
{
}

}  // namespace gaugekit
