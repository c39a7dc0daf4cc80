#include <doctest.h>

#include <cmath>
#include <random>

#include "gaugekit/analysis.hpp"
#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace gaugekit;

namespace {

const double kPi = 3.141592653589793;

double sq2(double x) { return x * x - 2; }

}  // namespace

TEST_CASE("modulus")
{
    CHECK(Modulus::lipschitz(4).step(1) == 0.25);
    CHECK(Modulus::hoelder(1, 0.5).step(0.1) == doctest::Approx(0.01));
    CHECK(Modulus::custom([](double e) { return e / 3; }).step(0.3) == doctest::Approx(0.1));
    CHECK(Modulus::lipschitz(4).step(0) == 0);
    CHECK(*Modulus::lipschitz(2).oscillation(3) == 6);
    CHECK_FALSE(Modulus::custom([](double e) { return e; }).oscillation(1).has_value());
    CHECK_THROWS_AS(Modulus::lipschitz(0), MalformedModulus);
    CHECK_THROWS_AS(Modulus::lipschitz(INFINITY), MalformedModulus);
    CHECK_THROWS_AS(Modulus::hoelder(1, 1.5), MalformedModulus);
    CHECK_THROWS_AS(Modulus::hoelder(1, 0), MalformedModulus);
    CHECK_THROWS_AS(Modulus::custom([](double) { return -1.0; }).step(1), MalformedModulus);
    CHECK_THROWS_AS(Modulus::custom([](double) { return NAN; }).step(1), MalformedModulus);
}

TEST_CASE("no_root_certificate")
{
    const auto L1 = Modulus::lipschitz(1);
    SUBCASE("one piece")
    {
        const auto r = no_root_certificate([](double x) { return x; }, 2, Interval(0, 1), L1);
        REQUIRE(std::holds_alternative<SignCertificate>(r));
        const auto& cert = std::get<SignCertificate>(r);
        CHECK(cert.side == Side::Below);
        REQUIRE(cert.pieces.size() == 1);
        CHECK(cert.pieces[0] == CertificatePiece{Interval(0, 1), 0, 0, 1});
        CHECK(verify_sign_certificate(cert, [](double x) { return x; }, L1, Interval(0, 1)));
    }
    SUBCASE("above")
    {
        const auto r = no_root_certificate([](double x) { return x * x + 1; }, 0, Interval(-1, 1), Modulus::lipschitz(2));
        REQUIRE(std::holds_alternative<SignCertificate>(r));
        CHECK(std::get<SignCertificate>(r).side == Side::Above);
    }
    SUBCASE("stall at the root of x^2 - 2")
    {
        const auto r = no_root_certificate(sq2, 0, Interval(1, 2), Modulus::lipschitz(4));
        REQUIRE(std::holds_alternative<StallAtRoot>(r));
        const double expected = oracle::bisect_root(sq2, 1, 2);
        CHECK(std::get<StallAtRoot>(r).c == doctest::Approx(expected).epsilon(1e-6));
        CHECK(std::get<StallAtRoot>(r).c <= expected);
    }
    SUBCASE("linear crossing")
    {
        // The probe for the accumulation point closes in on 0.5 until the last
        // half-ulp step rounds onto it, so f(0.5) == y is evaluated.
        try {
            no_root_certificate([](double x) { return x; }, 0.5, Interval(0, 1), L1);
            FAIL("expected TargetHitExactly");
        }
        catch (const TargetHitExactly& hit) {
            CHECK(hit.s == 0.5);
        }
    }
    SUBCASE("exact hit")
    {
        try {
            no_root_certificate([](double x) { return x; }, 0, Interval(0, 1), L1);
            FAIL("expected TargetHitExactly");
        }
        catch (const TargetHitExactly& hit) {
            CHECK(hit.s == 0);
        }
    }
}

TEST_CASE("find_root")
{
    SUBCASE("x^2 - 2")
    {
        const auto r = find_root(sq2, 0, Interval(1, 2), Modulus::lipschitz(4), 1e-6);
        CHECK(std::abs(r.c - oracle::bisect_root(sq2, 1, 2)) <= 1e-5);
        CHECK(std::abs(sq2(r.c)) <= 1e-6);
        CHECK(r.residual_bound >= std::abs(sq2(r.c)));
    }
    SUBCASE("cos")
    {
        const auto f = [](double x) { return std::cos(x); };
        const auto r = find_root(f, 0, Interval(1, 2), Modulus::lipschitz(1), 1e-6);
        CHECK(std::abs(r.c - oracle::bisect_root(f, 1, 2)) <= 1e-5);
        CHECK(r.residual_bound <= 1e-6);
    }
    SUBCASE("odd function")
    {
        const auto r = find_root([](double x) { return x; }, 0, Interval(-1, 1), Modulus::lipschitz(1), 1e-3);
        CHECK(std::abs(r.c) <= 1e-3);
    }
    SUBCASE("endpoints and errors")
    {
        CHECK(find_root(sq2, -1, Interval(1, 2), Modulus::lipschitz(4), 1e-6).c == 1);
        CHECK_THROWS_AS(find_root([](double x) { return x * x + 1; }, 0, Interval(-1, 1), Modulus::lipschitz(2), 1e-6),
                        NoSignChange);
        induction::InductionPolicy tiny;
        tiny.max_steps = 5;
        CHECK_THROWS_AS(find_root(sq2, 0, Interval(1, 2), Modulus::lipschitz(4), 1e-6, tiny), CapExceeded);
    }
    SUBCASE("a wrong modulus is detected")
    {
        // Slope 1000 with L = 1 steps straight across the root.
        CHECK_THROWS_AS(find_root([](double x) { return 1000 * x - 1; }, 0, Interval(0, 1), Modulus::lipschitz(1e-3), 1e-6),
                        MalformedModulus);
    }
}

TEST_CASE("bound_certificate")
{
    const auto sinf = [](double x) { return std::sin(x); };
    SUBCASE("sin below 1.5")
    {
        const auto r = bound_certificate(sinf, 1.5, Interval(0, kPi), Modulus::lipschitz(1));
        REQUIRE(std::holds_alternative<BoundCertificate>(r));
        const auto& cert = std::get<BoundCertificate>(r);
        CHECK(cert.pieces.size() <= 14);
        CHECK(verify_bound_certificate(cert, sinf, Modulus::lipschitz(1), Interval(0, kPi)));
    }
    SUBCASE("sin below 0.9 stalls where sin first reaches 0.9")
    {
        const auto r = bound_certificate(sinf, 0.9, Interval(0, kPi), Modulus::lipschitz(1));
        REQUIRE(std::holds_alternative<StallNearMax>(r));
        const double crossing = oracle::bisect_root([](double x) { return std::sin(x) - 0.9; }, 0, kPi / 2);
        CHECK(std::get<StallNearMax>(r).c == doctest::Approx(crossing).epsilon(1e-6));
    }
    SUBCASE("sampling a value above the bound")
    {
        CHECK_THROWS_AS(bound_certificate(sinf, 0.5, Interval(1, 2), Modulus::lipschitz(1)), BoundViolated);
    }
    SUBCASE("constant function")
    {
        const auto zero = [](double) { return 0.0; };
        const auto r = bound_certificate(zero, 1, Interval(0, 3), Modulus::lipschitz(1));
        REQUIRE(std::holds_alternative<BoundCertificate>(r));
        CHECK(std::get<BoundCertificate>(r).pieces.size() == 6);
    }
}

TEST_CASE("approx_sup and approx_inf")
{
    const auto sinf = [](double x) { return std::sin(x); };
    SUBCASE("sin on [0, pi]")
    {
        const auto est = approx_sup(sinf, Interval(0, kPi), Modulus::lipschitz(1), 1e-4);
        const auto dense = oracle::dense_max(sinf, 0, kPi);
        CHECK(est.lo <= est.hi);
        CHECK(est.hi - est.lo <= 1e-4);
        CHECK(est.lo <= dense.first + 1e-15);
        CHECK(est.hi >= dense.first);
        CHECK(est.lo <= 1.0);
        CHECK(est.hi >= 1.0);
        CHECK(sinf(est.candidate) == est.lo);
        CHECK(sinf(est.candidate) >= 1 - 1e-3);
    }
    SUBCASE("-x^2")
    {
        const auto est = approx_sup([](double x) { return -x * x; }, Interval(-1, 1), Modulus::lipschitz(2), 1e-6);
        CHECK(est.lo <= 0);
        CHECK(est.hi >= 0);
        CHECK(std::abs(est.candidate) <= 1e-3);
    }
    SUBCASE("constant")
    {
        // A flat f costs about 4 L (b - a) / tol pieces for the final certificate.
        const auto est = approx_sup([](double) { return 3.0; }, Interval(0, 1), Modulus::lipschitz(1), 1e-3);
        CHECK(est.lo == 3);
        CHECK(est.hi >= 3);
        CHECK(est.hi - est.lo <= 1e-3);
        const auto inf = approx_inf([](double) { return 3.0; }, Interval(0, 1), Modulus::lipschitz(1), 1e-3);
        CHECK(inf.hi == 3);
        CHECK(inf.hi - inf.lo <= 1e-3);
        CHECK_THROWS_AS(approx_sup([](double) { return 3.0; }, Interval(0, 1), Modulus::lipschitz(1), 1e-6), CapExceeded);
    }
    SUBCASE("inf of sin and x^2")
    {
        const auto s = approx_inf(sinf, Interval(0, kPi), Modulus::lipschitz(1), 1e-4);
        CHECK(s.lo <= 0);
        CHECK(s.hi >= 0);
        const auto q = approx_inf([](double x) { return x * x; }, Interval(-1, 1), Modulus::lipschitz(2), 1e-6);
        CHECK(q.lo <= 0);
        CHECK(q.hi >= 0);
        CHECK(std::abs(q.candidate) <= 1e-3);
    }
    SUBCASE("hoelder modulus")
    {
        const auto root = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
        const auto est = approx_inf(root, Interval(0, 1), Modulus::hoelder(1, 0.5), 1e-3);
        CHECK(est.lo <= 0);
        CHECK(est.hi >= 0);
        CHECK(std::abs(est.candidate - 0.3) <= 1e-5);
    }
}

TEST_CASE("sup brackets contain the sampled supremum")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto e = gen::random_poly(rng);
        const Interval dom(-1, 1);
        const double L = expr::lipschitz_bound(e, dom);
        const auto f = [&e](double x) { return e(x); };
        const auto est = approx_sup(f, dom, Modulus::lipschitz(L), 1e-4);
        const std::size_t n = 100'000;
        const auto dense = oracle::dense_max(f, dom.lo(), dom.hi(), n);
        INFO(expr::to_string(e));
        CHECK(est.lo <= dense.first + L * dom.width() / n);
        CHECK(est.hi >= dense.first);
        CHECK(est.hi - est.lo <= 1e-4);
        CHECK(f(est.candidate) == est.lo);
    }
}

TEST_CASE("certificates from random polynomials verify and never flip sides")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> target(-5.0, 5.0);
    int certified = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto e = gen::random_poly(rng);
        const Interval dom(-1, 1);
        const auto mod = Modulus::lipschitz(expr::lipschitz_bound(e, dom));
        const auto f = [&e](double x) { return e(x); };
        const double y = target(rng);
        SignOutcome r;
        try {
            r = no_root_certificate(f, y, dom, mod);
        }
        catch (const TargetHitExactly&) {
            continue;
        }
        if (const auto* cert = std::get_if<SignCertificate>(&r)) {
            ++certified;
            CHECK(verify_sign_certificate(*cert, f, mod, dom));
            for (const auto& p : cert->pieces) {
                const double L = std::get<Modulus::Lipschitz>(mod.representation()).L;
                CHECK(L * p.radius <= std::abs(p.value - y) / 2 * (1 + 4 * 0x1p-53));
            }
        }
        else {
            CHECK(std::get<StallAtRoot>(r).reason != induction::StallReason::CombineIncompatible);
        }
    }
    CHECK(certified > 50);
}

TEST_CASE("larger bounds never cost more pieces")
{
    const auto f = [](double x) { return std::sin(3 * x) + 0.5 * x; };
    const auto mod = Modulus::lipschitz(3.5);
    const Interval dom(0, 4);
    std::size_t previous = SIZE_MAX;
    for (double m = 2.9; m < 12; m += 0.37) {
        const auto r = bound_certificate(f, m, dom, mod);
        REQUIRE(std::holds_alternative<BoundCertificate>(r));
        const auto n = std::get<BoundCertificate>(r).pieces.size();
        CHECK(n <= previous);
        previous = n;
    }
}

TEST_CASE("tampered certificates are rejected")
{
    const auto f = [](double x) { return x * x + 1; };
    const auto mod = Modulus::lipschitz(4);
    const Interval dom(-2, 2);
    const auto r = no_root_certificate(f, 0.5, dom, mod);
    REQUIRE(std::holds_alternative<SignCertificate>(r));
    const auto cert = std::get<SignCertificate>(r);
    REQUIRE(cert.pieces.size() > 2);
    REQUIRE(verify_sign_certificate(cert, f, mod, dom));

    auto inflated = cert;
    inflated.pieces[1].radius *= 4;
    CHECK_FALSE(verify_sign_certificate(inflated, f, mod, dom));

    auto gap = cert;
    gap.pieces.erase(gap.pieces.begin() + 1);
    CHECK_FALSE(verify_sign_certificate(gap, f, mod, dom));

    auto flipped = cert;
    flipped.side = Side::Below;
    CHECK_FALSE(verify_sign_certificate(flipped, f, mod, dom));

    auto moved_value = cert;
    moved_value.pieces[0].value = std::nextafter(moved_value.pieces[0].value, 10.0);
    CHECK_FALSE(verify_sign_certificate(moved_value, f, mod, dom));

    auto short_domain = cert;
    short_domain.pieces.pop_back();
    CHECK(verify_sign_certificate(short_domain, f, mod));
    CHECK_FALSE(verify_sign_certificate(short_domain, f, mod, dom));

    const auto b = bound_certificate(f, 6, dom, mod);
    REQUIRE(std::holds_alternative<BoundCertificate>(b));
    auto lowered = std::get<BoundCertificate>(b);
    CHECK(verify_bound_certificate(lowered, f, mod, dom));
    lowered.bound = 4.5;
    CHECK_FALSE(verify_bound_certificate(lowered, f, mod, dom));
    CHECK_FALSE(verify_bound_certificate(BoundCertificate{6, {}}, f, mod));
}
