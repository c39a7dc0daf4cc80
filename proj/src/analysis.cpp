#include "gaugekit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaugekit/errors.hpp"

namespace gaugekit {
namespace {

using induction::InductionPolicy;
using induction::InductionResult;
using induction::LocalOracle;
using induction::RightStep;
using induction::StallDiagnostic;
using induction::Witness;
using induction::WitnessPtr;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PiecePayload {
    Side side = Side::Below;
    double sample = kNaN;
    double value = kNaN;
    double radius = kNaN;
};

using Piece = Witness<PiecePayload>;

void require_nondegenerate(const Interval& dom)
{
    if (!(dom.lo() < dom.hi())) {
        throw PreconditionViolated("domain must satisfy lo < hi");
    }
}

double sample(const RealFunction& f, double s)
{
    const double v = f(s);
    if (!std::isfinite(v)) {
        throw DomainError("f", s, "non-finite function value");
    }
    return v;
}

std::vector<CertificatePiece> collect_pieces(const Piece& root)
{
    std::vector<CertificatePiece> out;
    for (const Piece* leaf : induction::leaves(root)) {
        const auto& p = leaf->payload;
        out.push_back({leaf->interval, p.sample, p.value, p.radius});
    }
    return out;
}

// Builds the local oracle for "f stays strictly on one side of target".
// classify(s, fs) returns the side and the positive gap |fs - target| or throws.
template <class Classify>
LocalOracle<PiecePayload> one_sided_oracle(const RealFunction& f, const Modulus& mod, double b, Classify classify)
{
    LocalOracle<PiecePayload> oracle;
    oracle.right = [&f, &mod, b, classify](double s) -> std::optional<RightStep<PiecePayload>> {
        const double fs = sample(f, s);
        const auto [side, gap] = classify(s, fs);
        const double radius = mod.step(gap / 2);
        const double t = std::min(b, s + radius);
        if (!(t > s)) {
            return RightStep<PiecePayload>{s, nullptr};
        }
        return RightStep<PiecePayload>{t, induction::make_leaf(Interval(s, t), PiecePayload{side, s, fs, radius})};
    };
    oracle.left = [&f, &mod, classify](double s, double hint) -> WitnessPtr<PiecePayload> {
        const double fs = sample(f, s);
        const auto [side, gap] = classify(s, fs);
        const double radius = mod.step(gap / 2);
        if (!(s - radius <= hint)) {
            return nullptr;
        }
        return induction::make_leaf(Interval(hint, s), PiecePayload{side, s, fs, radius});
    };
    oracle.combine = [](const Piece& lhs, const Piece& rhs) -> std::optional<PiecePayload> {
        if (lhs.payload.side != rhs.payload.side) {
            return std::nullopt;
        }
        return PiecePayload{lhs.payload.side};
    };
    return oracle;
}

struct Classified {
    Side side;
    double gap;
};

bool verify_pieces(const std::vector<CertificatePiece>& pieces, const RealFunction& f, const Modulus& mod,
                   const std::optional<Interval>& dom, const std::function<std::optional<double>(double)>& gap_of)
{
    if (pieces.empty()) {
        return false;
    }
    if (dom && (pieces.front().cell.lo() != dom->lo() || pieces.back().cell.hi() != dom->hi())) {
        return false;
    }
    try {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const auto& p = pieces[i];
            if (!(p.cell.lo() < p.cell.hi())) {
                return false;
            }
            if (i + 1 < pieces.size() && p.cell.hi() != pieces[i + 1].cell.lo()) {
                return false;
            }
            if (!std::isfinite(p.sample) || !std::isfinite(p.radius) || !(p.radius > 0.0)) {
                return false;
            }
            const double fs = f(p.sample);
            if (fs != p.value) {
                return false;
            }
            if (!(p.sample - p.radius <= p.cell.lo() && p.cell.hi() <= p.sample + p.radius)) {
                return false;
            }
            const auto gap = gap_of(fs);
            if (!gap || !(*gap > 0.0)) {
                return false;
            }
            if (!(p.radius <= mod.step(*gap / 2))) {
                return false;
            }
        }
    }
    catch (const std::exception&) {
        return false;
    }
    return true;
}

}  // namespace

Modulus Modulus::lipschitz(double L)
{
    if (!std::isfinite(L) || !(L > 0.0)) {
        throw MalformedModulus("Lipschitz constant must be positive and finite");
    }
    return Modulus(Lipschitz{L});
}

Modulus Modulus::hoelder(double C, double alpha)
{
    if (!std::isfinite(C) || !(C > 0.0)) {
        throw MalformedModulus("Hoelder constant must be positive and finite");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw MalformedModulus("Hoelder exponent must lie in (0, 1]");
    }
    return Modulus(Hoelder{C, alpha});
}

Modulus Modulus::custom(Omega omega)
{
    if (!omega) {
        throw MalformedModulus("custom modulus needs a callable");
    }
    return Modulus(std::move(omega));
}

double Modulus::step(double eps) const
{
    if (!(eps > 0.0)) {
        return 0.0;
    }
    double d = 0.0;
    if (const auto* lip = std::get_if<Lipschitz>(&rep_)) {
        d = eps / lip->L;
    }
    else if (const auto* h = std::get_if<Hoelder>(&rep_)) {
        d = std::pow(eps / h->C, 1.0 / h->alpha);
    }
    else {
        d = std::get<Omega>(rep_)(eps);
    }
    if (std::isnan(d) || d < 0.0 || std::isinf(d)) {
        throw MalformedModulus("modulus step must be a finite non-negative number");
    }
    return d;
}

std::optional<double> Modulus::oscillation(double width) const
{
    if (const auto* lip = std::get_if<Lipschitz>(&rep_)) {
        return lip->L * width;
    }
    if (const auto* h = std::get_if<Hoelder>(&rep_)) {
        return h->C * std::pow(width, h->alpha);
    }
    return std::nullopt;
}

const char* to_string(Side side) { return side == Side::Below ? "below" : "above"; }

SignOutcome no_root_certificate(const RealFunction& f, double y, const Interval& dom, const Modulus& mod,
                                const InductionPolicy& policy)
{
    require_nondegenerate(dom);
    if (!std::isfinite(y)) {
        throw PreconditionViolated("target value must be finite");
    }
    const auto oracle = one_sided_oracle(f, mod, dom.hi(), [y](double s, double fs) {
        if (fs == y) {
            throw TargetHitExactly(s);
        }
        return Classified{fs < y ? Side::Below : Side::Above, std::abs(fs - y)};
    });
    auto run = induction::run_induction(oracle, dom, policy);
    if (auto* ok = std::get_if<induction::InductionSuccess<PiecePayload>>(&run)) {
        return SignCertificate{y, ok->witness->payload.side, collect_pieces(*ok->witness)};
    }
    auto& stall = std::get<StallDiagnostic<PiecePayload>>(run);
    return StallAtRoot{stall.frontier, stall.reason, std::move(stall.step_history)};
}

RootResult find_root(const RealFunction& f, double y, const Interval& dom, const Modulus& mod, double tol,
                     const InductionPolicy& policy)
{
    require_nondegenerate(dom);
    if (!std::isfinite(tol) || !(tol > 0.0)) {
        throw PreconditionViolated("tolerance must be positive");
    }
    const double ga = sample(f, dom.lo()) - y;
    const double gb = sample(f, dom.hi()) - y;
    if (ga == 0.0) {
        return {dom.lo(), 0.0};
    }
    if (gb == 0.0) {
        return {dom.hi(), 0.0};
    }
    if ((ga < 0.0) == (gb < 0.0)) {
        throw NoSignChange("f - y has the same sign at both ends of the interval");
    }

    // A stall means step(gap / 2) < step(tol / 2), hence gap < tol.
    InductionPolicy tuned = policy;
    const double eps = mod.step(tol / 2);
    if (eps > 0.0) {
        tuned.progress_eps = eps;
    }

    SignOutcome outcome;
    try {
        outcome = no_root_certificate(f, y, dom, mod, tuned);
    }
    catch (const TargetHitExactly& hit) {
        return {hit.s, 0.0};
    }
    if (std::holds_alternative<SignCertificate>(outcome)) {
        throw MalformedModulus("certified a constant sign across a sign change; the modulus does not hold for f");
    }
    const auto& stall = std::get<StallAtRoot>(outcome);
    if (stall.reason == induction::StallReason::CombineIncompatible) {
        throw MalformedModulus("sign flipped inside a certified piece; the modulus does not hold for f");
    }
    const double residual = std::abs(sample(f, stall.c) - y);
    if (stall.reason == induction::StallReason::CapExceeded || residual > tol) {
        throw CapExceeded("root search stopped before reaching the tolerance");
    }
    return {stall.c, residual};
}

BoundOutcome bound_certificate(const RealFunction& f, double bound, const Interval& dom, const Modulus& mod,
                               const InductionPolicy& policy)
{
    require_nondegenerate(dom);
    if (!std::isfinite(bound)) {
        throw PreconditionViolated("bound must be finite");
    }
    const auto oracle = one_sided_oracle(f, mod, dom.hi(), [bound](double s, double fs) {
        if (fs >= bound) {
            throw BoundViolated(s, fs, bound);
        }
        return Classified{Side::Below, bound - fs};
    });
    auto run = induction::run_induction(oracle, dom, policy);
    if (auto* ok = std::get_if<induction::InductionSuccess<PiecePayload>>(&run)) {
        return BoundCertificate{bound, collect_pieces(*ok->witness)};
    }
    auto& stall = std::get<StallDiagnostic<PiecePayload>>(run);
    return StallNearMax{stall.frontier, stall.reason, std::move(stall.step_history)};
}

SupEstimate approx_sup(const RealFunction& f, const Interval& dom, const Modulus& mod, double tol,
                       const InductionPolicy& policy)
{
    require_nondegenerate(dom);
    if (!std::isfinite(tol) || !(tol > 0.0)) {
        throw PreconditionViolated("tolerance must be positive");
    }
    constexpr int kGridIntervals = 65;  // 64 interior points plus both endpoints
    constexpr int kMaxWidenings = 64;
    constexpr int kMaxProbes = 400;

    double lo = -std::numeric_limits<double>::infinity();
    double candidate = dom.lo();
    for (int i = 0; i <= kGridIntervals; ++i) {
        const double x = i == kGridIntervals ? dom.hi() : dom.lo() + dom.width() * i / kGridIntervals;
        const double fx = sample(f, x);
        if (fx > lo) {
            lo = fx;
            candidate = x;
        }
    }

    // Stalls then land within tol / 4 of the probe value.
    InductionPolicy tuned = policy;
    const double eps = mod.step(tol / 8);
    if (eps > 0.0) {
        tuned.progress_eps = eps;
    }

    enum class Probe { Certified, Raised, Stuck };
    auto probe = [&](double m) {
        try {
            auto outcome = bound_certificate(f, m, dom, mod, tuned);
            if (std::holds_alternative<BoundCertificate>(outcome)) {
                return Probe::Certified;
            }
            const auto& stall = std::get<StallNearMax>(outcome);
            if (stall.reason == induction::StallReason::CapExceeded) {
                throw CapExceeded("bound probe exceeded the step budget");
            }
            const double fc = sample(f, stall.c);
            if (fc > lo) {
                lo = fc;
                candidate = stall.c;
                return Probe::Raised;
            }
            return Probe::Stuck;
        }
        catch (const BoundViolated& v) {
            if (v.fs > lo) {
                lo = v.fs;
                candidate = v.s;
            }
            return Probe::Raised;
        }
    };

    const auto osc = mod.oscillation(dom.width());
    double gap = std::max(osc.value_or(tol), tol);
    double hi = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < kMaxWidenings; ++i, gap *= 2) {
        const double m = lo + gap;
        if (probe(m) == Probe::Certified) {
            hi = m;
            break;
        }
    }
    if (std::isnan(hi)) {
        throw CapExceeded("could not certify any upper bound");
    }

    for (int probes = 0; hi - lo > tol; ++probes) {
        if (probes >= kMaxProbes) {
            throw CapExceeded("bracket did not shrink to the tolerance");
        }
        const double m = lo + (hi - lo) / 2;
        if (!(lo < m && m < hi)) {
            break;
        }
        if (probe(m) == Probe::Certified) {
            hi = m;
        }
    }
    return {lo, hi, candidate};
}

SupEstimate approx_inf(const RealFunction& f, const Interval& dom, const Modulus& mod, double tol,
                       const InductionPolicy& policy)
{
    const RealFunction negated = [&f](double x) { return -f(x); };
    const SupEstimate s = approx_sup(negated, dom, mod, tol, policy);
    return {-s.hi, -s.lo, s.candidate};
}

bool verify_sign_certificate(const SignCertificate& cert, const RealFunction& f, const Modulus& mod,
                             const std::optional<Interval>& dom)
{
    const double y = cert.target;
    const Side side = cert.side;
    return verify_pieces(cert.pieces, f, mod, dom, [y, side](double fs) -> std::optional<double> {
        if (side == Side::Below ? fs < y : fs > y) {
            return std::abs(fs - y);
        }
        return std::nullopt;
    });
}

bool verify_bound_certificate(const BoundCertificate& cert, const RealFunction& f, const Modulus& mod,
                              const std::optional<Interval>& dom)
{
    const double m = cert.bound;
    return verify_pieces(cert.pieces, f, mod, dom, [m](double fs) -> std::optional<double> {
        if (fs < m) {
            return m - fs;
        }
        return std::nullopt;
    });
}

}  // namespace gaugekit
