#pragma once

// Certified sign and bound statements for continuous functions with a known
// modulus of continuity, and the root / extremum locators built from them.
//
// Each certificate is a tiling of the domain into pieces. A piece records a
// sample point s, the value f(s) and a radius d with cell within [s - d, s + d].
// If gap is the distance from f(s) to the target, then d <= step(gap / 2)
// guarantees that f stays on the same side of the target over the whole cell.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "gaugekit/induction.hpp"
#include "gaugekit/interval.hpp"

namespace gaugekit {

using RealFunction = std::function<double(double)>;

// Quantitative continuity: |x - x'| <= step(eps) implies |f(x) - f(x')| <= eps.
class Modulus {
public:
    struct Lipschitz {
        double L;
    };
    struct Hoelder {
        double C;
        double alpha;
    };
    using Omega = std::function<double(double)>;

    static Modulus lipschitz(double L);
    static Modulus hoelder(double C, double alpha);
    static Modulus custom(Omega omega);

    // Radius guaranteeing oscillation at most eps. May underflow to 0 for tiny eps.
    double step(double eps) const;

    // Upper bound on the oscillation of f over any interval of the given width,
    // when the representation provides one (not for custom moduli).
    std::optional<double> oscillation(double width) const;

    const auto& representation() const noexcept { return rep_; }

private:
    using Rep = std::variant<Lipschitz, Hoelder, Omega>;
    explicit Modulus(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

enum class Side { Below, Above };

const char* to_string(Side side);

struct CertificatePiece {
    Interval cell;
    double sample;
    double value;   // f(sample)
    double radius;  // d

    friend bool operator==(const CertificatePiece&, const CertificatePiece&) = default;
};

// f(x) < target everywhere on the tiled interval (Below) or f(x) > target (Above).
struct SignCertificate {
    double target;
    Side side;
    std::vector<CertificatePiece> pieces;

    friend bool operator==(const SignCertificate&, const SignCertificate&) = default;
};

// f(x) < bound everywhere on the tiled interval.
struct BoundCertificate {
    double bound;
    std::vector<CertificatePiece> pieces;

    friend bool operator==(const BoundCertificate&, const BoundCertificate&) = default;
};

// The creep approached a point where f(c) gets arbitrarily close to y.
struct StallAtRoot {
    double c;
    induction::StallReason reason;
    std::vector<induction::StepRecord> step_history;
};

// The creep approached a point where f(c) gets arbitrarily close to the bound.
struct StallNearMax {
    double c;
    induction::StallReason reason;
    std::vector<induction::StepRecord> step_history;
};

struct RootResult {
    double c;
    double residual_bound;  // >= |f(c) - y|
};

// Bracket [lo, hi] for sup f (approx_sup) or inf f (approx_inf). The
// attained side (lo for sup, hi for inf) equals f(candidate).
struct SupEstimate {
    double lo;
    double hi;
    double candidate;
};

using SignOutcome = std::variant<SignCertificate, StallAtRoot>;
using BoundOutcome = std::variant<BoundCertificate, StallNearMax>;

// Throws TargetHitExactly if f(s) == y is ever evaluated.
SignOutcome no_root_certificate(const RealFunction& f, double y, const Interval& dom, const Modulus& mod,
                                const induction::InductionPolicy& policy = {});

// Requires f(a) - y and f(b) - y of opposite signs (or one of them zero).
RootResult find_root(const RealFunction& f, double y, const Interval& dom, const Modulus& mod, double tol,
                     const induction::InductionPolicy& policy = {});

// Throws BoundViolated if f(s) >= bound is ever evaluated.
BoundOutcome bound_certificate(const RealFunction& f, double bound, const Interval& dom, const Modulus& mod,
                               const induction::InductionPolicy& policy = {});

SupEstimate approx_sup(const RealFunction& f, const Interval& dom, const Modulus& mod, double tol,
                       const induction::InductionPolicy& policy = {});
SupEstimate approx_inf(const RealFunction& f, const Interval& dom, const Modulus& mod, double tol,
                       const induction::InductionPolicy& policy = {});

// Independent replays. When dom is given the pieces must tile exactly dom.
bool verify_sign_certificate(const SignCertificate& cert, const RealFunction& f, const Modulus& mod,
                             const std::optional<Interval>& dom = std::nullopt);
bool verify_bound_certificate(const BoundCertificate& cert, const RealFunction& f, const Modulus& mod,
                              const std::optional<Interval>& dom = std::nullopt);

}  // namespace gaugekit
