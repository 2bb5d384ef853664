#include <catch2/catch_amalgamated.hpp>

#include "moebius/hyperbolic.hpp"
#include "moebius/rng.hpp"

using namespace moebius;

namespace {

// Independent oracle for the golden map (2,1,1,1): fixed points solve
// z^2 - z - 1 = 0 directly, multiplier from the trace relation.
struct GoldenOracle {
    double alpha = (1.0 + std::sqrt(5.0)) / 2.0;
    double beta = (1.0 - std::sqrt(5.0)) / 2.0;
    double k = (7.0 + 3.0 * std::sqrt(5.0)) / 2.0;
};

// Hyperbolic map with a real trace drawn from [2.1, 6] and complex a, c.
MobiusMap random_hyperbolic(SplitMix64& rng) {
    const double tr = rng.next_in(2.1, 6.0);
    const Complex c = std::polar(rng.next_in(0.2, 2.0), rng.next_angle());
    const Complex a = rng.next_in_disk(Complex(0, 0), 3.0);
    const Complex d = tr - a;
    const Complex b = (a * d - 1.0) / c;
    return normalize(a, b, c, d);
}

} // namespace

TEST_CASE("golden map profile matches the quadratic-formula oracle") {
    const HyperbolicProfile p = profile(preset_golden());
    const GoldenOracle o;
    CHECK(std::abs(p.alpha - Complex(o.alpha)) <= 1e-12);
    CHECK(std::abs(p.beta - Complex(o.beta)) <= 1e-12);
    CHECK(std::abs(p.k - o.k) <= 1e-12);
    CHECK(p.tau == Catch::Approx(1.0).margin(1e-12));
    // Vieta: alpha + beta = (a-d)/c, alpha beta = -b/c
    CHECK(std::abs(p.alpha + p.beta - Complex(1.0)) <= 1e-12);
    CHECK(std::abs(p.alpha * p.beta - Complex(-1.0)) <= 1e-12);
}

TEST_CASE("pielou profile has the closed-form fixed points") {
    const HyperbolicProfile p = profile(preset_pielou(4.0, 1.0));
    CHECK(std::abs(p.alpha - Complex(3.0)) <= 1e-12);  // (A-1)/C
    CHECK(std::abs(p.beta) <= 1e-12);
    CHECK(p.k == Catch::Approx(4.0).margin(1e-12));    // k = A
    CHECK(std::abs(p.pole() - Complex(-1.0)) <= 1e-12);
    CHECK(std::abs(h_of_pole(p) - Complex(0.25)) <= 1e-12);
}

TEST_CASE("profile rejects unsupported maps") {
    CHECK_THROWS_AS(profile(normalize(1.0, 1.0, -1.0, 0.0)), NotHyperbolic);
    CHECK_THROWS_AS(profile(normalize(2.0, 1.0, 0.0, 0.5)), LinearMap);
}

TEST_CASE("profile invariants hold for random hyperbolic maps") {
    SplitMix64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        const MobiusMap g = random_hyperbolic(rng);
        const HyperbolicProfile p = profile(g);

        CHECK(chordal_distance(apply(g, ExtendedComplex(p.alpha)),
                               ExtendedComplex(p.alpha)) <= 1e-9);
        CHECK(chordal_distance(apply(g, ExtendedComplex(p.beta)),
                               ExtendedComplex(p.beta)) <= 1e-9);
        CHECK(std::abs(derivative(g, ExtendedComplex(p.beta)) - Complex(p.k)) <=
              1e-9 * p.k);
        CHECK(std::abs(derivative(g, ExtendedComplex(p.alpha)) - Complex(1.0 / p.k)) <=
              1e-9);
        CHECK(std::abs((g.c * p.alpha + g.d) * (g.c * p.beta + g.d) - Complex(1.0)) <=
              1e-9);
        const double sk = std::sqrt(p.k);
        CHECK(std::abs(Complex(sk + 1.0 / sk) - g.trace()) <= 1e-9);
        CHECK(p.k > 1.0);
        CHECK(p.tau > 0.0);
    }
}

TEST_CASE("to_dilation returns the multiplier and validates the conjugation") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK(to_dilation(p) ==
          Catch::Approx((7.0 + 3.0 * std::sqrt(5.0)) / 2.0).margin(1e-9));

    // h(g(z)) = k h(z), checked at a concrete point
    const ExtendedComplex lhs = p.h_apply(apply(p.g, ExtendedComplex(0.0)));
    const ExtendedComplex rhs(p.k * p.h_apply(ExtendedComplex(0.0)).value());
    CHECK(chordal_distance(lhs, rhs) <= 1e-9);

    SplitMix64 rng(33);
    for (int i = 0; i < 200; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        CHECK(to_dilation(q) == q.k);
    }
}

TEST_CASE("axis points and their h-images") {
    const HyperbolicProfile p = profile(preset_golden());

    CHECK(axis_point(p, 0.0).value == p.beta);
    CHECK(axis_point(p, 1.0).value == p.alpha);
    // the pole sits at parameter -1/(k-1)
    const double t_pole = -1.0 / (p.k - 1.0);
    CHECK(std::abs(axis_point(p, t_pole).value - p.pole()) <= 1e-12);

    CHECK(std::abs(h_of_axis_point(p, 0.0)) <= 1e-12);
    CHECK(std::abs(h_of_axis_point(p, 0.5) - Complex(-1.0)) <= 1e-12);
    CHECK(std::abs(h_of_axis_point(p, 2.0) - Complex(2.0)) <= 1e-12);
    CHECK_THROWS_AS(h_of_axis_point(p, 1.0), MapsToInfinity);
}

TEST_CASE("mirror-point images") {
    const HyperbolicProfile p = profile(preset_golden());
    const double k = p.k;

    CHECK(std::abs(h_of_mirror_point(p, 0.0) - Complex(2.0 / (k + 1.0))) <= 1e-12);
    CHECK(std::abs(h_of_mirror_point(p, 0.0) - Complex(0.2546438)) <= 1e-6);
    CHECK(std::abs(h_of_mirror_point(p, 0.5) -
                   Complex((k + 3.0) / (3.0 * k + 1.0))) <= 1e-12);
    // vanishing denominator at t = -(k+1)/(k-1)
    CHECK_THROWS_AS(h_of_mirror_point(p, -(k + 1.0) / (k - 1.0)), MapsToInfinity);
}

TEST_CASE("h of the pole is the reciprocal multiplier") {
    const HyperbolicProfile p = profile(preset_golden());
    CHECK(std::abs(h_of_pole(p) - Complex(1.0 / p.k)) == 0.0);
    CHECK(std::abs(h_of_pole(p) - Complex(0.145898)) <= 1e-6);

    SplitMix64 rng(55);
    for (int i = 0; i < 100; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        CHECK(std::abs(h_of_pole(q) - Complex(1.0 / q.k)) == 0.0);
    }
}

TEST_CASE("distance identities") {
    const HyperbolicProfile p = profile(preset_golden());
    const DistanceIdentities ids = distance_identities(p);

    CHECK(ids.inv_c_abs == Catch::Approx(1.0).margin(1e-12));
    CHECK(ids.radius_sqrtk == Catch::Approx(0.3819660).margin(1e-6));
    CHECK(ids.radius_sqrtk == Catch::Approx(std::abs(p.beta + 1.0)).margin(1e-12));
    CHECK(ids.inv_c_abs / ids.radius_sqrtk ==
          Catch::Approx(std::sqrt(p.k)).margin(1e-12));

    SplitMix64 rng(77);
    for (int i = 0; i < 300; ++i) {
        const HyperbolicProfile q = profile(random_hyperbolic(rng));
        const DistanceIdentities r = distance_identities(q);
        CHECK(r.radius_sqrtk ==
              Catch::Approx(std::abs((q.g.c * q.beta + q.g.d) / q.g.c)).margin(1e-9));
        CHECK(r.inv_c_abs == Catch::Approx(1.0 / std::abs(q.g.c)).margin(1e-9));
    }
}

TEST_CASE("forward iteration converges to alpha, backward to beta") {
    SplitMix64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const MobiusMap g = random_hyperbolic(rng);
        const HyperbolicProfile p = profile(g);
        const int n =
            static_cast<int>(std::ceil(std::log(1e-8) / std::log(1.0 / p.k))) + 20;

        const ExtendedComplex z(rng.next_in(-8, 8), rng.next_in(-8, 8));
        if (chordal_distance(z, ExtendedComplex(p.beta)) > 0.1) {
            ExtendedComplex w = z;
            for (int j = 0; j < n; ++j) w = apply(g, w);
            CHECK(chordal_distance(w, ExtendedComplex(p.alpha)) <= 1e-6);
        }

        const ExtendedComplex zb(rng.next_in(-8, 8), rng.next_in(-8, 8));
        if (chordal_distance(zb, ExtendedComplex(p.alpha)) > 0.1) {
            const MobiusMap gi = inverse(g);
            ExtendedComplex wb = zb;
            for (int j = 0; j < n; ++j) wb = apply(gi, wb);
            CHECK(chordal_distance(wb, ExtendedComplex(p.beta)) <= 1e-6);
        }
    }
}

TEST_CASE("the fixed-point line is invariant and h maps it to the real line") {
    SplitMix64 rng(111);
    for (int i = 0; i < 100; ++i) {
        const HyperbolicProfile p = profile(random_hyperbolic(rng));
        const double t = rng.next_in(-4.0, 5.0);
        const ExtendedComplex image =
            apply(p.g, ExtendedComplex(axis_point(p, t).value));
        if (!image.is_infinity()) {
            // collinearity of g(p_t) with alpha, beta
            const Complex w = (image.value() - p.beta) / (p.alpha - p.beta);
            CHECK(std::abs(w.imag()) / std::max(1.0, std::abs(w)) <= 1e-9);
        }
        if (std::abs(t - 1.0) > 1e-3) {
            const ExtendedComplex hw =
                p.h_apply(ExtendedComplex(axis_point(p, t).value));
            if (!hw.is_infinity()) {
                CHECK(std::abs(hw.value().imag()) /
                          std::max(1.0, std::abs(hw.value())) <= 1e-9);
            }
        }
    }
}

TEST_CASE("axis points are collinear with the fixed points") {
    SplitMix64 rng(123);
    for (int i = 0; i < 200; ++i) {
        const HyperbolicProfile p = profile(random_hyperbolic(rng));
        const double t = rng.next_in(-10.0, 10.0);
        const Complex v = axis_point(p, t).value;
        const Complex w = (v - p.beta) / (p.alpha - p.beta);
        CHECK(std::abs(w.imag()) <= 1e-12 * std::max(1.0, std::abs(w)));
    }
}
