#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gaugekit/expr.hpp"
#include "gaugekit/interval.hpp"

namespace gaugekit {

// A strictly positive function on an interval. Positivity of expression and
// callback gauges is checked at every evaluation; a non-positive or
// non-finite value raises GaugeNonpositive.
class Gauge {
public:
    struct Constant {
        double value;
    };
    // Right-continuous step function: value[i] on [breakpoints[i], breakpoints[i+1]),
    // the last value from the last breakpoint on, the first value left of breakpoints[0].
    struct PiecewiseConstant {
        std::vector<double> breakpoints;
        std::vector<double> values;
    };
    using Callback = std::function<double(double)>;

    static Gauge constant(double value);
    static Gauge piecewise(std::vector<double> breakpoints, std::vector<double> values);
    static Gauge expression(expr::Expr e);
    static Gauge opaque(Callback fn);

    double operator()(double x) const;

    const auto& representation() const noexcept { return rep_; }

private:
    using Rep = std::variant<Constant, PiecewiseConstant, expr::Expr, Callback>;
    explicit Gauge(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

struct TaggedInterval {
    Interval cell;
    double tag = 0.0;

    friend bool operator==(const TaggedInterval&, const TaggedInterval&) = default;
};

struct TaggedPartition {
    Interval domain;
    std::vector<TaggedInterval> cells;

    friend bool operator==(const TaggedPartition&, const TaggedPartition&) = default;
};

enum class ViolationKind {
    Empty,        // no cells at all
    DomainStart,  // cells[0].lo != domain.lo
    DomainEnd,    // cells.back().hi != domain.hi
    Degenerate,   // cell.lo == cell.hi
    Contiguity,   // cells[i].hi != cells[i+1].lo
    TagOutside,   // tag not in cell
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::size_t index;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

// Lists every broken structural invariant; never throws.
ValidationReport validate_partition(const TaggedPartition& p);

struct FinenessReport {
    bool fine = true;
    std::optional<std::size_t> first_violation;
    // Margin of the first violating cell (negative), or the smallest margin
    // over all cells when fine. The margin of a cell is
    // min(lo - (tag - d), (tag + d) - hi) with d = gauge(tag).
    double margin = 0.0;
};

// Each cell must satisfy tag - g(tag) <= lo and hi <= tag + g(tag), evaluated
// in binary64 with no slack. Requires a structurally valid partition.
FinenessReport is_delta_fine(const TaggedPartition& p, const Gauge& g);

// Joins partitions of adjacent intervals; the junction must match exactly.
TaggedPartition concat(const TaggedPartition& left, const TaggedPartition& right);

}  // namespace gaugekit
