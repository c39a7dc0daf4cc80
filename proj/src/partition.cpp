#include "gaugekit/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaugekit/errors.hpp"

namespace gaugekit {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Gauge Gauge::constant(double value)
{
    if (!positive_finite(value)) {
        throw PreconditionViolated("constant gauge value must be positive and finite, got " + fmt(value));
    }
    return Gauge(Constant{value});
}

Gauge Gauge::piecewise(std::vector<double> breakpoints, std::vector<double> values)
{
    if (breakpoints.empty() || breakpoints.size() != values.size()) {
        throw PreconditionViolated("piecewise gauge needs one value per breakpoint");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!std::isfinite(breakpoints[i])) {
            throw PreconditionViolated("piecewise gauge breakpoints must be finite");
        }
        if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
            throw PreconditionViolated("piecewise gauge breakpoints must be strictly ascending");
        }
        if (!positive_finite(values[i])) {
            throw PreconditionViolated("piecewise gauge values must be positive and finite, got " +
                                       fmt(values[i]));
        }
    }
    return Gauge(PiecewiseConstant{std::move(breakpoints), std::move(values)});
}

Gauge Gauge::expression(expr::Expr e) { return Gauge(std::move(e)); }

Gauge Gauge::opaque(Callback fn)
{
    if (!fn) {
        throw PreconditionViolated("opaque gauge needs a callable");
    }
    return Gauge(std::move(fn));
}

double Gauge::operator()(double x) const
{
    const double v = std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [x](const PiecewiseConstant& pw) {
                const auto it = std::upper_bound(pw.breakpoints.begin(), pw.breakpoints.end(), x);
                const auto idx = it == pw.breakpoints.begin()
                                     ? std::size_t{0}
                                     : static_cast<std::size_t>(it - pw.breakpoints.begin()) - 1;
                return pw.values[idx];
            },
            [x](const expr::Expr& e) { return expr::eval(e, x); },
            [x](const Callback& fn) { return fn(x); },
        },
        rep_);
    if (!positive_finite(v)) {
        throw GaugeNonpositive(x, v);
    }
    return v;
}

const char* to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::Empty: return "empty";
    case ViolationKind::DomainStart: return "domain_start";
    case ViolationKind::DomainEnd: return "domain_end";
    case ViolationKind::Degenerate: return "degenerate";
    case ViolationKind::Contiguity: return "contiguity";
    case ViolationKind::TagOutside: return "tag_outside";
    }
    return "unknown";
}

ValidationReport validate_partition(const TaggedPartition& p)
{
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::size_t index, std::string message) {
        report.violations.push_back({kind, index, std::move(message)});
    };

    if (p.cells.empty()) {
        add(ViolationKind::Empty, 0, "partition has no cells");
        return report;
    }
    if (p.cells.front().cell.lo() != p.domain.lo()) {
        add(ViolationKind::DomainStart, 0,
            "first cell starts at " + fmt(p.cells.front().cell.lo()) + ", domain at " + fmt(p.domain.lo()));
    }
    const std::size_t last = p.cells.size() - 1;
    if (p.cells.back().cell.hi() != p.domain.hi()) {
        add(ViolationKind::DomainEnd, last,
            "last cell ends at " + fmt(p.cells.back().cell.hi()) + ", domain at " + fmt(p.domain.hi()));
    }
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const auto& c = p.cells[i];
        if (c.cell.degenerate()) {
            add(ViolationKind::Degenerate, i, "cell " + std::to_string(i) + " is a single point");
        }
        if (!c.cell.contains(c.tag)) {
            add(ViolationKind::TagOutside, i,
                "tag " + fmt(c.tag) + " outside cell [" + fmt(c.cell.lo()) + ", " + fmt(c.cell.hi()) + "]");
        }
        if (i < last && c.cell.hi() != p.cells[i + 1].cell.lo()) {
            add(ViolationKind::Contiguity, i,
                "cell " + std::to_string(i) + " ends at " + fmt(c.cell.hi()) + " but cell " +
                    std::to_string(i + 1) + " starts at " + fmt(p.cells[i + 1].cell.lo()));
        }
    }
    return report;
}

FinenessReport is_delta_fine(const TaggedPartition& p, const Gauge& g)
{
    if (!validate_partition(p).ok()) {
        throw InvalidPartition("fineness is only defined for structurally valid partitions");
    }
    FinenessReport report;
    report.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        const auto& c = p.cells[i];
        const double d = g(c.tag);
        const double reach_lo = c.tag - d;
        const double reach_hi = c.tag + d;
        const double margin = std::min(c.cell.lo() - reach_lo, reach_hi - c.cell.hi());
        if (!(reach_lo <= c.cell.lo() && c.cell.hi() <= reach_hi)) {
            report.fine = false;
            report.first_violation = i;
            report.margin = margin;
            return report;
        }
        report.margin = std::min(report.margin, margin);
    }
    return report;
}

TaggedPartition concat(const TaggedPartition& left, const TaggedPartition& right)
{
    if (left.cells.empty() || right.cells.empty()) {
        throw InvalidPartition("cannot concatenate an empty partition");
    }
    if (left.domain.hi() != right.domain.lo()) {
        throw DomainMismatch("junction mismatch: " + fmt(left.domain.hi()) + " vs " + fmt(right.domain.lo()));
    }
    TaggedPartition out{Interval(left.domain.lo(), right.domain.hi()), left.cells};
    out.cells.insert(out.cells.end(), right.cells.begin(), right.cells.end());
    return out;
}

}  // namespace gaugekit
