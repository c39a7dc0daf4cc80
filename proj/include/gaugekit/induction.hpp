#pragma once

// Interval induction: grow a certified prefix [a, s] of [a, b] from local
// certificates until s reaches b.
//
// A LocalOracle answers three questions about a family of subintervals:
//   right(s)       some t in ]s, b] and a witness that [s, t] is in the family,
//   left(s, hint)  a witness that [hint, s] is in the family (optional),
//   combine(u, v)  payload of a witness for the union of adjacent u and v,
//                  or nothing when the two cannot be merged.
//
// run_induction keeps a running witness for [a, s] and asks right(s) for the
// next piece. When the answers stop making progress (a run of steps shorter
// than progress_eps, a zero-length step, or a refusal), it estimates the
// accumulation point s* by probing further right and asks left(s*, s) to
// close the gap [s, s*] in one piece. If that is impossible the run ends with a
// StallDiagnostic whose frontier is the last certified right end.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "gaugekit/errors.hpp"
#include "gaugekit/interval.hpp"

namespace gaugekit::induction {

template <class Payload>
struct Witness {
    Interval interval;
    Payload payload{};
    std::shared_ptr<const Witness> first;
    std::shared_ptr<const Witness> second;

    bool is_leaf() const noexcept { return !first && !second; }

    // Running witnesses are deep left spines; tear them down without recursion.
    ~Witness()
    {
        std::vector<std::shared_ptr<const Witness>> pending;
        if (first) {
            pending.push_back(std::move(first));
        }
        if (second) {
            pending.push_back(std::move(second));
        }
        while (!pending.empty()) {
            std::shared_ptr<const Witness> node = std::move(pending.back());
            pending.pop_back();
            if (node.use_count() == 1) {
                // Sole owner: detach the children before node goes away. Nodes
                // are always created non-const through make_shared.
                auto& owned = const_cast<Witness&>(*node);
                if (owned.first) {
                    pending.push_back(std::move(owned.first));
                }
                if (owned.second) {
                    pending.push_back(std::move(owned.second));
                }
            }
        }
    }
};

template <class Payload>
using WitnessPtr = std::shared_ptr<const Witness<Payload>>;

template <class Payload>
WitnessPtr<Payload> make_leaf(const Interval& iv, Payload payload)
{
    return std::make_shared<Witness<Payload>>(Witness<Payload>{iv, std::move(payload), nullptr, nullptr});
}

template <class Payload>
WitnessPtr<Payload> make_node(WitnessPtr<Payload> lhs, WitnessPtr<Payload> rhs, Payload payload)
{
    const Interval span(lhs->interval.lo(), rhs->interval.hi());
    return std::make_shared<Witness<Payload>>(Witness<Payload>{span, std::move(payload), std::move(lhs), std::move(rhs)});
}

template <class Payload>
struct RightStep {
    double t;
    WitnessPtr<Payload> witness;  // certifies [s, t]; may be null when t == s
};

template <class Payload>
struct LocalOracle {
    std::function<std::optional<RightStep<Payload>>(double s)> right;
    std::function<WitnessPtr<Payload>(double s, double hint)> left;  // null result = refuse
    std::function<std::optional<Payload>(const Witness<Payload>&, const Witness<Payload>&)> combine;
};

struct StepRecord {
    double s;
    double t;
};

struct InductionPolicy {
    std::size_t max_steps = 1'000'000;
    double progress_eps = 1e-12;
    std::size_t max_limit_closures = 64;
    // Consecutive steps shorter than progress_eps that trigger limit closing.
    std::size_t slow_steps_before_stall = 3;
    // Called for every committed step (right steps and limit closures).
    std::function<void(const StepRecord&)> on_step;
};

enum class StallReason { OracleRefused, ProgressUnderflow, CapExceeded, CombineIncompatible };

inline const char* to_string(StallReason r)
{
    switch (r) {
    case StallReason::OracleRefused: return "oracle_refused";
    case StallReason::ProgressUnderflow: return "progress_underflow";
    case StallReason::CapExceeded: return "cap_exceeded";
    case StallReason::CombineIncompatible: return "combine_incompatible";
    }
    return "unknown";
}

template <class Payload>
struct StallDiagnostic {
    double frontier;                     // [a, frontier] is witnessed (trivially when frontier == a)
    WitnessPtr<Payload> witness_so_far;  // null when frontier == a
    std::vector<StepRecord> step_history;
    StallReason reason;
    double accumulation_estimate;  // rightmost probe point, == frontier if none was made
};

template <class Payload>
struct InductionSuccess {
    WitnessPtr<Payload> witness;
    std::vector<StepRecord> step_history;
    std::size_t limit_closures = 0;
};

template <class Payload>
using InductionResult = std::variant<InductionSuccess<Payload>, StallDiagnostic<Payload>>;

template <class Payload>
InductionResult<Payload> run_induction(const LocalOracle<Payload>& oracle, const Interval& dom,
                                       const InductionPolicy& policy = {})
{
    if (!(dom.lo() < dom.hi())) {
        throw PreconditionViolated("induction domain must satisfy lo < hi");
    }
    if (!oracle.right || !oracle.combine) {
        throw PreconditionViolated("oracle needs right and combine");
    }
    if (policy.max_steps == 0 || !(policy.progress_eps > 0.0) || policy.slow_steps_before_stall == 0) {
        throw PreconditionViolated("induction policy caps must be positive");
    }

    const double b = dom.hi();
    double s = dom.lo();
    WitnessPtr<Payload> running;
    std::vector<StepRecord> history;
    std::size_t steps = 0;
    std::size_t closures = 0;
    std::size_t slow_run = 0;

    auto ask_right = [&](double at) {
        ++steps;
        auto answer = oracle.right(at);
        if (!answer) {
            return answer;
        }
        if (!std::isfinite(answer->t) || answer->t < at || answer->t > b) {
            throw MalformedOracle("right step leaves ]s, b]");
        }
        if (answer->t > at && (!answer->witness || answer->witness->interval != Interval(at, answer->t))) {
            throw MalformedOracle("right witness does not cover exactly [s, t]");
        }
        return answer;
    };

    // Extends the running witness by w, which must start at s.
    auto absorb = [&](const WitnessPtr<Payload>& w) -> bool {
        if (!running) {
            running = w;
        }
        else {
            auto merged = oracle.combine(*running, *w);
            if (!merged) {
                return false;
            }
            running = make_node(running, w, std::move(*merged));
        }
        const StepRecord rec{s, w->interval.hi()};
        history.push_back(rec);
        if (policy.on_step) {
            policy.on_step(rec);
        }
        s = rec.t;
        return true;
    };

    auto stall = [&](StallReason reason, double estimate) {
        return StallDiagnostic<Payload>{s, running, std::move(history), reason, estimate};
    };

    for (;;) {
        if (steps >= policy.max_steps) {
            return stall(StallReason::CapExceeded, s);
        }
        auto answer = ask_right(s);

        StallReason reason = StallReason::ProgressUnderflow;
        bool close = false;
        if (!answer) {
            close = true;
            reason = StallReason::OracleRefused;
        }
        else if (answer->t == s) {
            close = true;
        }
        else if (answer->t - s < policy.progress_eps) {
            close = ++slow_run >= policy.slow_steps_before_stall;
        }
        else {
            slow_run = 0;
        }

        if (!close) {
            if (!absorb(answer->witness)) {
                return stall(StallReason::CombineIncompatible, s);
            }
            if (s == b) {
                return InductionSuccess<Payload>{running, std::move(history), closures};
            }
            continue;
        }

        // Limit closing: locate the accumulation point, then certify [s, s*] from the left.
        double probe = (answer && answer->t > s) ? answer->t : s;
        while (probe < b && steps < policy.max_steps) {
            auto next = ask_right(probe);
            if (!next || next->t == probe) {
                break;
            }
            probe = next->t;
        }
        if (!oracle.left || probe == s) {
            return stall(reason, probe);
        }
        if (closures >= policy.max_limit_closures) {
            return stall(StallReason::CapExceeded, probe);
        }
        auto closing = oracle.left(probe, s);
        if (!closing) {
            return stall(reason, probe);
        }
        if (closing->interval != Interval(s, probe)) {
            throw MalformedOracle("left witness does not cover exactly [hint, s]");
        }
        if (!absorb(closing)) {
            return stall(StallReason::CombineIncompatible, probe);
        }
        ++closures;
        slow_run = 0;
        if (s == b) {
            return InductionSuccess<Payload>{running, std::move(history), closures};
        }
    }
}

// Leaves of a witness tree in left-to-right order.
template <class Payload>
std::vector<const Witness<Payload>*> leaves(const Witness<Payload>& root)
{
    std::vector<const Witness<Payload>*> out;
    std::vector<const Witness<Payload>*> stack{&root};
    while (!stack.empty()) {
        const auto* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) {
            out.push_back(node);
            continue;
        }
        if (node->second) {
            stack.push_back(node->second.get());
        }
        if (node->first) {
            stack.push_back(node->first.get());
        }
    }
    return out;
}

// Replays the combination tree: every inner node must have two adjacent
// children spanning exactly its interval, the root must span dom, and every
// leaf must pass leaf_check.
template <class Payload, class LeafCheck>
bool verify_witness(const Witness<Payload>& root, const Interval& dom, LeafCheck&& leaf_check)
{
    if (root.interval != dom) {
        return false;
    }
    std::vector<const Witness<Payload>*> stack{&root};
    while (!stack.empty()) {
        const auto* node = stack.back();
        stack.pop_back();
        if (node->is_leaf()) {
            if (!(node->interval.lo() < node->interval.hi()) || !leaf_check(*node)) {
                return false;
            }
            continue;
        }
        if (!node->first || !node->second) {
            return false;
        }
        const Interval& l = node->first->interval;
        const Interval& r = node->second->interval;
        if (l.lo() != node->interval.lo() || l.hi() != r.lo() || r.hi() != node->interval.hi()) {
            return false;
        }
        stack.push_back(node->second.get());
        stack.push_back(node->first.get());
    }
    return true;
}

}  // namespace gaugekit::induction
