#pragma once

#include <compare>
#include <ostream>

namespace gaugekit {

// Closed interval [lo, hi] with finite binary64 endpoints and lo <= hi.
// The degenerate case lo == hi is representable; engines never emit it as a cell.
class Interval {
public:
    constexpr Interval() = default;
    Interval(double lo, double hi);

    static Interval point(double x) { return Interval(x, x); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }
    double midpoint() const noexcept { return lo_ + (hi_ - lo_) / 2; }
    bool degenerate() const noexcept { return lo_ == hi_; }

    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const noexcept
    {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& iv);

}  // namespace gaugekit
