#pragma once

// Construction of gauge-fine tagged partitions.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "gaugekit/interval.hpp"
#include "gaugekit/partition.hpp"

namespace gaugekit {

struct PartitionCaps {
    std::size_t max_cells = 1'000'000;
    std::size_t max_depth = 60;
};

enum class StrategyKind { GreedyCreep, Bisection, Hybrid };

struct PartitionStrategy {
    StrategyKind kind = StrategyKind::Hybrid;
    PartitionCaps caps;
};

enum class CreepStallReason { CellCapReached, ProgressUnderflow };

// Greedy creep stopped before reaching the right end of the domain.
// frontier is the right end of the last emitted cell (or the domain start).
struct CreepStall {
    double frontier;
    std::vector<TaggedInterval> cells_so_far;
    CreepStallReason reason;
};

struct DepthExceeded {
    Interval deepest_cell;
    bool cell_cap_reached = false;  // max_cells hit rather than max_depth
};

struct PartitionFailure {
    std::optional<CreepStall> creep;
    std::optional<DepthExceeded> bisection;
};

using CreepResult = std::variant<TaggedPartition, CreepStall>;
using BisectResult = std::variant<TaggedPartition, DepthExceeded>;
using PartitionResult = std::variant<TaggedPartition, PartitionFailure>;

// Left-to-right creep. At frontier s the last cell [s, b] tagged b is emitted as
// soon as b - g(b) <= s; otherwise [s, min(b, s + g(s))] tagged s.
CreepResult creep_partition(const Gauge& g, const Interval& dom, const PartitionCaps& caps = {});

// Recursive midpoint splitting. A cell [u, v] is accepted with the first tag in
// (u, midpoint, v) whose gauge ball covers it.
BisectResult bisect_partition(const Gauge& g, const Interval& dom, const PartitionCaps& caps = {});

// Hybrid runs the creep and falls back to bisection when it stalls.
PartitionResult fine_partition(const Gauge& g, const Interval& dom, const PartitionStrategy& strategy = {});

}  // namespace gaugekit
