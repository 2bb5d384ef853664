#include <catch2/catch_amalgamated.hpp>

#include "moebius/regions.hpp"
#include "moebius/rng.hpp"

using namespace moebius;

namespace {

MobiusMap random_hyperbolic(SplitMix64& rng) {
    const double tr = rng.next_in(2.1, 6.0);
    const Complex c = std::polar(rng.next_in(0.2, 2.0), rng.next_angle());
    const Complex a = rng.next_in_disk(Complex(0, 0), 3.0);
    const Complex d = tr - a;
    const Complex b = (a * d - 1.0) / c;
    return normalize(a, b, c, d);
}

} // namespace

TEST_CASE("S(r) membership") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK(s_contains(p, 2.0, ExtendedComplex(2.0)));        // |2+1| = 3 > 2
    CHECK_FALSE(s_contains(p, 0.5, ExtendedComplex(p.pole())));
    CHECK_FALSE(s_contains(p, 2.0, ExtendedComplex::infinity()));
}

TEST_CASE("T(r) membership") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK(t_contains(p, 2.0, ExtendedComplex(2.1)));        // |0.1| < 0.5
    CHECK(t_contains(p, 2.0, ExtendedComplex(2.0)));        // center a/c
    CHECK_FALSE(t_contains(p, 2.0, ExtendedComplex(3.0)));  // 1 > 0.5
}

TEST_CASE("g maps S(r) onto T(r) minus the center") {
    SplitMix64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const HyperbolicProfile p = profile(random_hyperbolic(rng));
        const double r = rng.next_in(0.1, 4.0);
        const double rs = r / std::abs(p.g.c);
        const Complex z = p.pole() + std::polar(rs * (1.0 + 3.0 * rng.next_double() + 1e-6),
                                                rng.next_angle());
        REQUIRE(s_contains(p, r, ExtendedComplex(z)));
        const ExtendedComplex w = apply(p.g, ExtendedComplex(z));
        CHECK(t_contains(p, r, w));
        CHECK(w != ExtendedComplex(p.g.a / p.g.c));

        // boundary goes to boundary: |g(z) - a/c| = 1/(r|c|)
        const Complex zb = p.pole() + std::polar(rs, rng.next_angle());
        const ExtendedComplex wb = apply(p.g, ExtendedComplex(zb));
        CHECK(std::abs(std::abs(wb.value() - p.g.a / p.g.c) -
                       1.0 / (r * std::abs(p.g.c))) <= 1e-9);
    }
}

TEST_CASE("nesting margin of the closed T(r) inside S(r)") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK(closure_nesting_margin(p, 2.0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(closure_nesting_margin(p, 1.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(closure_nesting_margin(p, 3.0), HypothesisViolated);  // 3+1/3 > 3

    // margin tends to zero at the hypothesis boundary
    const double r_hi = (3.0 + std::sqrt(5.0)) / 2.0;  // r + 1/r = 3
    CHECK(closure_nesting_margin(p, r_hi * (1.0 - 1e-9)) ==
          Catch::Approx(0.0).margin(1e-6));

    SplitMix64 rng(22);
    for (int i = 0; i < 500; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        const double tr = q.trace();
        const double lo = (tr - std::sqrt(tr * tr - 4.0)) / 2.0;
        const double hi = (tr + std::sqrt(tr * tr - 4.0)) / 2.0;
        const double r = lo + (0.05 + 0.9 * rng.next_double()) * (hi - lo);
        const double margin = closure_nesting_margin(q, r);
        CHECK(margin > 0.0);

        // closed T(r) sampled points all pass s_contains
        const double tr_rad = 1.0 / (r * std::abs(q.g.c));
        const Complex center = q.g.a / q.g.c;
        for (int j = 0; j < 16; ++j) {
            const Complex z =
                center + std::polar(tr_rad * std::sqrt(rng.next_double()),
                                    rng.next_angle());
            CHECK(s_contains(q, r, ExtendedComplex(z)));
        }
        const Complex zb = center + std::polar(tr_rad, rng.next_angle());
        CHECK(s_contains(q, r, ExtendedComplex(zb)));
    }
}

TEST_CASE("the tau/2 disk strictly contains the unit-radius disk") {
    SplitMix64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const HyperbolicProfile p = profile(random_hyperbolic(rng));
        const double ac = std::abs(p.g.c);
        CHECK((p.trace() / 2.0) / ac > 1.0 / ac);
    }
}

TEST_CASE("closed-form image of the sqrt(k) circle") {
    const HyperbolicProfile p = profile(preset_golden());
    const DiskSpec d = image_circle_sqrtk(p);
    CHECK(d.center.real() == Catch::Approx(0.127322).margin(1e-6));
    CHECK(d.radius == Catch::Approx(0.127322).margin(1e-6));
    // passes through 0 = h(beta) and through 2/(k+1)
    CHECK(std::abs(d.center) - d.radius == Catch::Approx(0.0).margin(1e-15));
    CHECK(std::abs(d.center + Complex(d.radius) - Complex(2.0 / (p.k + 1.0))) <= 1e-15);

    // all h-images of dS(1/sqrt k) land on it
    const double rs = (1.0 / std::sqrt(p.k)) / std::abs(p.g.c);
    for (const Complex& z : sample_boundary(DiskSpec{p.pole(), rs, DiskSense::Boundary}, 64)) {
        const ExtendedComplex w = p.h_apply(ExtendedComplex(z));
        REQUIRE_FALSE(w.is_infinity());
        CHECK(std::abs(std::abs(w.value() - d.center) - d.radius) <= 1e-9);
    }
}

TEST_CASE("closed-form image of the tau/2 circle") {
    const HyperbolicProfile p = profile(preset_golden());
    const DiskSpec d = image_circle_tau_half(p);
    const double y = (p.k + 3.0) / (3.0 * p.k + 1.0);
    CHECK(y == Catch::Approx(0.457010).margin(1e-6));
    CHECK(d.center.real() == Catch::Approx(-0.271495).margin(1e-6));
    CHECK(d.radius == Catch::Approx(0.728505).margin(1e-6));
    // passes through -1 = h((alpha+beta)/2)
    CHECK(std::abs(d.center - Complex(d.radius) - Complex(-1.0)) <= 1e-12);

    SplitMix64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        const DiskSpec dq = image_circle_tau_half(q);
        // contained in the closed unit disk for every k > 1
        CHECK(dq.radius + std::abs(dq.center) <= 1.0 + 1e-12);

        const double rs = (1.0 + q.tau / 2.0) / std::abs(q.g.c);
        for (const Complex& z :
             sample_boundary(DiskSpec{q.pole(), rs, DiskSense::Boundary}, 64)) {
            const ExtendedComplex w = q.h_apply(ExtendedComplex(z));
            REQUIRE_FALSE(w.is_infinity());
            CHECK(std::abs(std::abs(w.value() - dq.center) - dq.radius) <= 1e-9);
        }
    }
}

TEST_CASE("avoided region membership in dilation coordinates") {
    const double k = profile(preset_golden()).k;
    const AvoidedRegionW r(k, 0.01);

    CHECK(avoided_w_contains(r, Complex(1.0 / (2.0 * k), 0.0)));  // on the segment
    CHECK_FALSE(avoided_w_contains(r, Complex(1.0, 0.0)));
    CHECK(r.band(r.t1) == Catch::Approx(0.011708).margin(1e-6));
    CHECK(avoided_w_contains(r, Complex(-0.0117, 0.0)));  // in R1

    CHECK_THROWS_AS(AvoidedRegionW(k, 0.9), DeltaTooLarge);
    CHECK_THROWS_AS(AvoidedRegionW(k, 0.01, 0.5, 1.0, 1.0), HypothesisViolated);
}

TEST_CASE("avoided-region pieces are closed under tiny perturbations") {
    const double k = profile(preset_golden()).k;
    const AvoidedRegionW r(k, 0.01);
    const double b = r.band(1.0);
    // boundary points stay members after a 1e-15 nudge
    CHECK(avoided_w_contains(r, Complex(0.5 / k, b)));
    CHECK(avoided_w_contains(r, Complex(0.5 / k, b - 1e-15)));
    CHECK(avoided_w_contains(r, Complex(-r.band(r.t1), 0.0)));
    CHECK(avoided_w_contains(r, Complex(-r.band(r.t1) + 1e-15, 0.0)));
    const double tip = 1.0 / k + r.band(1.0);
    CHECK(avoided_w_contains(r, Complex(tip - 1e-12, 0.0)));
    CHECK(avoided_w_contains(r, Complex(tip - 1e-12 - 1e-15, 0.0)));
}

TEST_CASE("avoided region pulled back to the z plane") {
    const HyperbolicProfile p = profile(preset_golden());
    const AvoidedRegionW r(p.k, 0.01);

    CHECK(avoided_z_contains(p, r, ExtendedComplex(p.pole())));
    CHECK(avoided_z_contains(p, r, ExtendedComplex(p.beta)));   // h(beta) = 0, closed
    CHECK_FALSE(avoided_z_contains(p, r, ExtendedComplex(p.alpha)));  // h(alpha) = inf
}

TEST_CASE("epsilon_tilde value and containment") {
    const HyperbolicProfile p = profile(preset_golden());
    const double e1 = epsilon_tilde(p, 0.01);
    CHECK(e1 == Catch::Approx(0.005236).margin(1e-6));

    // linear in delta
    CHECK(epsilon_tilde(p, 0.005) == Catch::Approx(e1 / 2.0).margin(1e-15));

    // smaller than the sharper pullback radius
    const double k = p.k;
    const double sharper = k * k * 0.01 * std::abs(p.alpha - p.beta) /
                           ((k - 1.0) * ((k - 1.0) * (k - 1.0) - k * 0.01));
    CHECK(e1 < sharper);

    CHECK_THROWS_AS(epsilon_tilde(p, 10.0), DeltaTooLarge);

    // disk boundary samples inside the avoided region, random maps
    SplitMix64 rng(41);
    for (int i = 0; i < 200; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        const double delta = 0.01 * (1.0 - 1.0 / q.k) * (1.0 - 1.0 / q.k);
        const double eps = epsilon_tilde(q, delta);
        const AvoidedRegionW region(q.k, delta);
        for (const Complex& z : sample_boundary(
                 DiskSpec{q.pole(), 0.999 * eps, DiskSense::Boundary}, 32)) {
            CHECK(avoided_z_contains(q, region, ExtendedComplex(z)));
        }
    }
}

TEST_CASE("epsilon_tilde refuses to certify containment once the overshoot bites") {
    // The h-image of the pole disk exceeds the strip band by the factor
    // (k-1)^4 / ((k-1)^4 - k^2 delta^2). Near the trace floor with delta at
    // half the region gate that excess is a few percent, so the sampled
    // containment check must fail loudly instead of passing a bad radius.
    const HyperbolicProfile p = profile(normalize(1.2, 0.2, 1.0, 1.0));  // tr 2.2
    const double delta = 0.5 * (1.0 - 1.0 / p.k) * (1.0 - 1.0 / p.k);
    CHECK_THROWS_AS(epsilon_tilde(p, delta), CrossCheckFailed);
}

TEST_CASE("escape region membership") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK_FALSE(escape_region_w_contains(p, 0.01, Complex(0.0, 0.0)));
    CHECK(escape_region_w_contains(p, 0.01, Complex(0.3, 0.0)));
    CHECK_FALSE(escape_region_w_contains(p, 0.01, Complex(1.1, 0.0)));
}

TEST_CASE("boundary sampling") {
    const DiskSpec unit{Complex(0, 0), 1.0, DiskSense::Boundary};
    const std::vector<Complex> four = sample_boundary(unit, 4);
    REQUIRE(four.size() == 4);
    CHECK(std::abs(four[0] - Complex(1, 0)) <= 1e-15);
    CHECK(std::abs(four[1] - Complex(0, 1)) <= 1e-15);
    CHECK(std::abs(four[2] - Complex(-1, 0)) <= 1e-15);
    CHECK(std::abs(four[3] - Complex(0, -1)) <= 1e-15);

    CHECK_THROWS_AS(sample_boundary(unit, 2), HypothesisViolated);

    SplitMix64 rng(51);
    const DiskSpec d{Complex(rng.next_in(-2, 2), rng.next_in(-2, 2)),
                     rng.next_in(0.1, 3.0), DiskSense::Boundary};
    for (const Complex& z : sample_boundary(d, 17)) {
        CHECK(std::abs(std::abs(z - d.center) - d.radius) <= 1e-12);
    }
}

TEST_CASE("sqrt(k) image circle pulls back onto dS(1/sqrt k)") {
    const HyperbolicProfile p = profile(preset_golden());
    const DiskSpec d = image_circle_sqrtk(p);
    const double rs = (1.0 / std::sqrt(p.k)) / std::abs(p.g.c);
    for (const Complex& w : sample_boundary(d, 64)) {
        const ExtendedComplex z = p.h_inv_apply(ExtendedComplex(w));
        if (z.is_infinity()) continue;  // w = 1 would be h(inf); not on this circle
        CHECK(std::abs(std::abs(z.value() - p.pole()) - rs) <= 1e-9);
    }
}

TEST_CASE("region survey counts members") {
    const HyperbolicProfile p = profile(preset_golden());
    std::vector<Complex> samples;
    for (int i = -5; i <= 5; ++i) samples.push_back(Complex(i, 0.0));
    const RegionReport report = survey_region(
        "S(2)", [&](Complex z) { return s_contains(p, 2.0, ExtendedComplex(z)); },
        samples);
    CHECK(report.sample_count == 11);
    CHECK(report.member_count <= report.sample_count);
    // |z+1| > 2 on the integer line: z <= -4 or z >= 2
    CHECK(report.member_count == 6);
    CHECK(report.witnesses.size() == 6);
}
