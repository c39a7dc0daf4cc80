#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gaugekit/cousin.hpp"
#include "gaugekit/errors.hpp"
#include "oracles.hpp"

using namespace gaugekit;

namespace {

TaggedPartition expect_partition(const CreepResult& r)
{
    REQUIRE(std::holds_alternative<TaggedPartition>(r));
    return std::get<TaggedPartition>(r);
}

Gauge random_piecewise(std::mt19937_64& rng, const Interval& dom)
{
    std::uniform_int_distribution<int> count(0, 8);
    std::uniform_real_distribution<double> where(dom.lo(), dom.hi());
    std::uniform_real_distribution<double> value(1e-3, 0.5);
    std::vector<double> bps{dom.lo()};
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        bps.push_back(where(rng));
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    std::vector<double> vals;
    for (std::size_t i = 0; i < bps.size(); ++i) {
        vals.push_back(value(rng));
    }
    return Gauge::piecewise(bps, vals);
}

}  // namespace

TEST_CASE("creep with a constant gauge")
{
    const auto& p = expect_partition(creep_partition(Gauge::constant(0.3), Interval(0, 1)));
    REQUIRE(p.cells.size() == 4);
    const double b1 = 0.3, b2 = b1 + 0.3, b3 = b2 + 0.3;
    CHECK(p.cells[0] == TaggedInterval{Interval(0, b1), 0});
    CHECK(p.cells[1] == TaggedInterval{Interval(b1, b2), b1});
    CHECK(p.cells[2] == TaggedInterval{Interval(b2, b3), b2});
    CHECK(p.cells[3] == TaggedInterval{Interval(b3, 1), 1});
    CHECK(b3 == 0.8999999999999999);
    CHECK(is_delta_fine(p, Gauge::constant(0.3)).fine);
}

TEST_CASE("gauge wider than the domain gives one cell")
{
    const auto& p = expect_partition(creep_partition(Gauge::constant(2), Interval(0, 1)));
    REQUIRE(p.cells.size() == 1);
    CHECK(p.cells[0].cell == Interval(0, 1));
}

TEST_CASE("shrinking gauge uses the right-end lookahead")
{
    const auto g = Gauge::opaque([](double x) { return x < 1 ? (1 - x) / 2 : 0.25; });
    const auto& p = expect_partition(creep_partition(g, Interval(0, 1)));
    REQUIRE(p.cells.size() == 3);
    CHECK(p.cells[0] == TaggedInterval{Interval(0, 0.5), 0});
    CHECK(p.cells[1] == TaggedInterval{Interval(0.5, 0.75), 0.5});
    CHECK(p.cells[2] == TaggedInterval{Interval(0.75, 1), 1});
    CHECK(is_delta_fine(p, g).fine);
}

TEST_CASE("creep stalls where the gauge underflows")
{
    const auto g = Gauge::opaque([](double x) { return std::max(1e-300, std::abs(x - 0.5) / 2); });
    const auto r = creep_partition(g, Interval(0, 1), PartitionCaps{1000, 60});
    REQUIRE(std::holds_alternative<CreepStall>(r));
    const auto& stall = std::get<CreepStall>(r);
    CHECK(stall.frontier <= 0.5);
    CHECK(stall.frontier > 0.49);
    CHECK(stall.cells_so_far.size() <= 1000);
    CHECK(stall.cells_so_far.back().cell.hi() == stall.frontier);
}

TEST_CASE("bisection")
{
    SUBCASE("midpoint tags are accepted first when they cover")
    {
        const auto r = bisect_partition(Gauge::constant(0.25), Interval(0, 1));
        REQUIRE(std::holds_alternative<TaggedPartition>(r));
        const auto& p = std::get<TaggedPartition>(r);
        REQUIRE(p.cells.size() == 2);
        CHECK(p.cells[0] == TaggedInterval{Interval(0, 0.5), 0.25});
        CHECK(p.cells[1] == TaggedInterval{Interval(0.5, 1), 0.75});
    }
    SUBCASE("a gauge tiny away from 0 forces the tag 0")
    {
        const auto g = Gauge::opaque([](double x) { return x == 0 ? 0.1 : x / 2; });
        const auto r = bisect_partition(g, Interval(0, 1));
        REQUIRE(std::holds_alternative<TaggedPartition>(r));
        const auto& p = std::get<TaggedPartition>(r);
        CHECK(is_delta_fine(p, g).fine);
        CHECK(p.cells.front().cell.lo() == 0);
        CHECK(p.cells.front().tag == 0);
    }
    SUBCASE("depth cap")
    {
        const auto r = bisect_partition(Gauge::constant(std::ldexp(1.0, -60)), Interval(0, 1), PartitionCaps{1'000'000, 10});
        REQUIRE(std::holds_alternative<DepthExceeded>(r));
        const auto& fail = std::get<DepthExceeded>(r);
        CHECK_FALSE(fail.cell_cap_reached);
        CHECK(fail.deepest_cell.width() == std::ldexp(1.0, -10));
    }
    SUBCASE("cell cap")
    {
        const auto r = bisect_partition(Gauge::constant(1e-3), Interval(0, 1), PartitionCaps{10, 60});
        REQUIRE(std::holds_alternative<DepthExceeded>(r));
        CHECK(std::get<DepthExceeded>(r).cell_cap_reached);
    }
}

TEST_CASE("degenerate domains are rejected")
{
    const auto g = Gauge::constant(1);
    CHECK_THROWS_AS(creep_partition(g, Interval::point(1)), PreconditionViolated);
    CHECK_THROWS_AS(bisect_partition(g, Interval::point(1)), PreconditionViolated);
    CHECK_THROWS_AS(fine_partition(g, Interval::point(1)), PreconditionViolated);
}

TEST_CASE("hybrid falls back to bisection")
{
    // 0.125 everywhere except a needle at 0.5; the creep lands on 0.5 and stalls,
    // bisection tags the needle at a cell end.
    const auto g = Gauge::opaque([](double x) { return x == 0.5 ? 1e-300 : 0.125; });
    const auto creep = creep_partition(g, Interval(0, 1), PartitionCaps{1000, 60});
    REQUIRE(std::holds_alternative<CreepStall>(creep));
    CHECK(std::get<CreepStall>(creep).frontier == 0.5);

    const auto r = fine_partition(g, Interval(0, 1), PartitionStrategy{StrategyKind::Hybrid, PartitionCaps{1000, 60}});
    REQUIRE(std::holds_alternative<TaggedPartition>(r));
    CHECK(is_delta_fine(std::get<TaggedPartition>(r), g).fine);

    const auto only_creep = fine_partition(g, Interval(0, 1), PartitionStrategy{StrategyKind::GreedyCreep, PartitionCaps{1000, 60}});
    REQUIRE(std::holds_alternative<PartitionFailure>(only_creep));
    CHECK(std::get<PartitionFailure>(only_creep).creep.has_value());
    CHECK_FALSE(std::get<PartitionFailure>(only_creep).bisection.has_value());
}

TEST_CASE("constructed partitions are valid and fine")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> start(-5.0, 5.0);
    std::uniform_real_distribution<double> width(1e-3, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double a = start(rng);
        const Interval dom(a, a + width(rng));
        const Gauge g = random_piecewise(rng, dom);
        for (auto kind : {StrategyKind::GreedyCreep, StrategyKind::Bisection, StrategyKind::Hybrid}) {
            const auto r = fine_partition(g, dom, PartitionStrategy{kind, {}});
            REQUIRE(std::holds_alternative<TaggedPartition>(r));
            const auto& p = std::get<TaggedPartition>(r);
            CHECK(validate_partition(p).ok());
            CHECK(is_delta_fine(p, g).fine);
        }
    }
}

TEST_CASE("creep cell count bound for gauges bounded below")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> width(0.01, 10.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Interval dom(0, width(rng));
        const Gauge g = random_piecewise(rng, dom);
        const auto& pw = std::get<Gauge::PiecewiseConstant>(g.representation());
        const double m = *std::min_element(pw.values.begin(), pw.values.end());
        const auto& p = expect_partition(creep_partition(g, dom));
        CHECK(p.cells.size() <= static_cast<std::size_t>(std::ceil(dom.width() / m)) + 1);
    }
}

TEST_CASE("constant gauge cell count")
{
    SUBCASE("dyadic grid matches the closed form")
    {
        for (int k = 1; k <= 8; ++k) {
            const double h = std::ldexp(1.0, -k);
            for (int w = 1; w <= 40; ++w) {
                const double width = w * std::ldexp(1.0, -3);
                const auto& p = expect_partition(creep_partition(Gauge::constant(h), Interval(0, width)));
                CHECK(p.cells.size() == oracle::count_formula(width, h));
            }
        }
    }
    SUBCASE("decimal steps match a float simulation")
    {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> hs(0.01, 1.0);
        std::uniform_real_distribution<double> ws(0.01, 10.0);
        for (int trial = 0; trial < 500; ++trial) {
            const double h = hs(rng), w = ws(rng);
            const auto& p = expect_partition(creep_partition(Gauge::constant(h), Interval(0, w)));
            CHECK(p.cells.size() == oracle::simulate_constant_creep(h, 0, w));
        }
    }
}
