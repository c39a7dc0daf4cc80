#include "gaugekit/cousin.hpp"

#include <algorithm>
#include <utility>

#include "gaugekit/errors.hpp"

namespace gaugekit {
namespace {

void require_nondegenerate(const Interval& dom)
{
    if (!(dom.lo() < dom.hi())) {
        throw PreconditionViolated("partition domain must satisfy lo < hi");
    }
}

bool covers(const Gauge& g, double tag, double u, double v)
{
    const double d = g(tag);
    return tag - d <= u && v <= tag + d;
}

class Bisector {
public:
    Bisector(const Gauge& g, const PartitionCaps& caps) : g_(g), caps_(caps) {}

    // Left-to-right depth-first; returns false and fills failure_ on the first dead end.
    bool run(double u, double v, std::size_t depth)
    {
        for (const double tag : {u, u + (v - u) / 2, v}) {
            if (covers(g_, tag, u, v)) {
                if (cells_.size() >= caps_.max_cells) {
                    failure_ = DepthExceeded{Interval(u, v), true};
                    return false;
                }
                cells_.push_back({Interval(u, v), tag});
                return true;
            }
        }
        const double m = u + (v - u) / 2;
        if (depth >= caps_.max_depth || !(u < m && m < v)) {
            failure_ = DepthExceeded{Interval(u, v), false};
            return false;
        }
        return run(u, m, depth + 1) && run(m, v, depth + 1);
    }

    std::vector<TaggedInterval> cells_;
    DepthExceeded failure_{};

private:
    const Gauge& g_;
    const PartitionCaps& caps_;
};

}  // namespace

CreepResult creep_partition(const Gauge& g, const Interval& dom, const PartitionCaps& caps)
{
    require_nondegenerate(dom);
    const double a = dom.lo();
    const double b = dom.hi();
    const double reach_b = b - g(b);

    std::vector<TaggedInterval> cells;
    double s = a;
    for (;;) {
        if (cells.size() >= caps.max_cells) {
            return CreepStall{s, std::move(cells), CreepStallReason::CellCapReached};
        }
        if (reach_b <= s) {
            cells.push_back({Interval(s, b), b});
            return TaggedPartition{dom, std::move(cells)};
        }
        const double t = std::min(b, s + g(s));
        if (!(t > s)) {
            return CreepStall{s, std::move(cells), CreepStallReason::ProgressUnderflow};
        }
        cells.push_back({Interval(s, t), s});
        if (t == b) {
            return TaggedPartition{dom, std::move(cells)};
        }
        s = t;
    }
}

BisectResult bisect_partition(const Gauge& g, const Interval& dom, const PartitionCaps& caps)
{
    require_nondegenerate(dom);
    Bisector bisector(g, caps);
    if (!bisector.run(dom.lo(), dom.hi(), 0)) {
        return bisector.failure_;
    }
    return TaggedPartition{dom, std::move(bisector.cells_)};
}

PartitionResult fine_partition(const Gauge& g, const Interval& dom, const PartitionStrategy& strategy)
{
    require_nondegenerate(dom);
    PartitionFailure failure;
    if (strategy.kind != StrategyKind::Bisection) {
        auto creep = creep_partition(g, dom, strategy.caps);
        if (auto* p = std::get_if<TaggedPartition>(&creep)) {
            return std::move(*p);
        }
        failure.creep = std::get<CreepStall>(std::move(creep));
        if (strategy.kind == StrategyKind::GreedyCreep) {
            return failure;
        }
    }
    auto bisect = bisect_partition(g, dom, strategy.caps);
    if (auto* p = std::get_if<TaggedPartition>(&bisect)) {
        return std::move(*p);
    }
    failure.bisection = std::get<DepthExceeded>(bisect);
    return failure;
}

}  // namespace gaugekit
