#include "gaugekit/interval.hpp"

#include <cmath>
#include <sstream>

#include "gaugekit/errors.hpp"

namespace gaugekit {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidInterval("interval endpoints must be finite");
    }
    if (lo > hi) {
        std::ostringstream os;
        os.precision(17);
        os << "interval endpoints out of order: [" << lo << ", " << hi << "]";
        throw InvalidInterval(os.str());
    }
}

std::ostream& operator<<(std::ostream& os, const Interval& iv)
{
    return os << '[' << iv.lo() << ", " << iv.hi() << ']';
}

}  // namespace gaugekit
