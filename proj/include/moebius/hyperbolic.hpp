#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "moebius/errors.hpp"
#include "moebius/extended_plane.hpp"
#include "moebius/mobius.hpp"
#include "moebius/tolerances.hpp"

namespace moebius {

// Derived analytical data of a hyperbolic map with c != 0:
//   alpha, beta   attracting / repelling fixed points
//   k             multiplier, k = g'(beta) = 1/(c beta + d)^2 > 1
//   tau           trace surplus, tr(g) = 2 + tau
//   h             conjugator h(z) = (z - beta)/(z - alpha), so that
//                 h o g o h^-1 is the dilation w -> k w.
// Immutable after construction; safe to share between threads.
struct HyperbolicProfile {
    MobiusMap g;
    Complex alpha{};
    Complex beta{};
    double k = 0.0;
    double tau = 0.0;
    MobiusMap h;      // determinant-normalized, for composition
    MobiusMap h_inv;  // normalized inverse, action w -> (alpha w - beta)/(w - 1)

    Complex pole() const { return -g.d / g.c; }
    double trace() const { return g.trace().real(); }

    // The conjugator evaluated through its literal formula (z - beta)/(z - alpha).
    // Projectively identical to apply(h, z); kept for formula-level checks.
    ExtendedComplex h_apply(const ExtendedComplex& z) const {
        if (z.is_infinity()) return ExtendedComplex(Complex(1.0, 0.0));
        const Complex den = z.value() - alpha;
        if (std::abs(den) == 0.0) return ExtendedComplex::infinity();
        return ExtendedComplex((z.value() - beta) / den);
    }

    // Literal inverse formula (alpha w - beta)/(w - 1); h_inv(1) = inf.
    ExtendedComplex h_inv_apply(const ExtendedComplex& w) const {
        if (w.is_infinity()) return ExtendedComplex(alpha);
        const Complex den = w.value() - Complex(1.0, 0.0);
        if (std::abs(den) == 0.0) return ExtendedComplex::infinity();
        return ExtendedComplex((alpha * w.value() - beta) / den);
    }
};

// A point t*alpha + (1-t)*beta of the invariant line through the fixed points.
struct AxisPoint {
    double t = 0.0;
    Complex value{};
};

// Fixed points from the quadratic c z^2 - (a - d) z - b = 0, with the real
// positive root of tr^2 - 4 (trace sign convention guarantees tr > 2).
// Throws NotHyperbolic / LinearMap when the hypotheses fail.
inline HyperbolicProfile profile(const MobiusMap& g) {
    if (classify(g) != MapClass::HyperbolicRealTrace) {
        throw NotHyperbolic("map trace is not real with |tr| > 2");
    }
    if (is_linear(g)) throw LinearMap("profile requires c != 0");

    const double tr = g.trace().real();
    const double root = std::sqrt(tr * tr - 4.0);

    Complex alpha = (g.a - g.d + root) / (2.0 * g.c);
    Complex beta = (g.a - g.d - root) / (2.0 * g.c);

    // sqrt(k) + 1/sqrt(k) = tr, so k = ((tr + root)/2)^2.
    double k = (tr + root) * (tr + root) / 4.0;

    // The "+" root is attracting whenever tr > 2; re-check through the
    // derivative and swap if the computed phases disagree.
    if (std::abs(derivative(g, ExtendedComplex(alpha))) >= 1.0) {
        std::swap(alpha, beta);
    }

    if (std::abs(alpha - beta) <
        1e-8 * std::max({1.0, std::abs(alpha), std::abs(beta)})) {
        throw NotHyperbolic("fixed points nearly coincide");
    }

    HyperbolicProfile p;
    p.g = g;
    p.alpha = alpha;
    p.beta = beta;
    p.k = k;
    p.tau = tr - 2.0;
    p.h = normalize(Complex(1.0), -beta, Complex(1.0), -alpha);
    p.h_inv = inverse(p.h);
    return p;
}

// Returns the multiplier and verifies that h o g o h^-1 really is the
// dilation diag(sqrt k, 1/sqrt k), coefficient by coefficient.
inline double to_dilation(const HyperbolicProfile& p) {
    const MobiusMap m = compose(p.h, compose(p.g, p.h_inv));
    const double sk = std::sqrt(p.k);
    const double tol = scaled_tol(1e-9);
    const double err = std::max({std::abs(m.a - Complex(sk)),
                                 std::abs(m.b),
                                 std::abs(m.c),
                                 std::abs(m.d - Complex(1.0 / sk))});
    if (err > tol) {
        throw ConjugationMismatch("h o g o h^-1 deviates from the dilation by " +
                                  std::to_string(err));
    }
    return p.k;
}

inline AxisPoint axis_point(const HyperbolicProfile& p, double t) {
    return AxisPoint{t, t * p.alpha + (1.0 - t) * p.beta};
}

namespace detail {

inline void cross_check(const ExtendedComplex& direct, Complex formula, double tol,
                        const char* what) {
    if (chordal_distance(direct, ExtendedComplex(formula)) > tol) {
        throw CrossCheckFailed(std::string(what) + ": closed form disagrees with h");
    }
}

} // namespace detail

// h(p_t) = t/(t - 1) for the axis point p_t; real for real t.
inline Complex h_of_axis_point(const HyperbolicProfile& p, double t) {
    if (t == 1.0) throw MapsToInfinity("h(alpha) = infinity");
    const Complex w(t / (t - 1.0), 0.0);
    detail::cross_check(p.h_apply(ExtendedComplex(axis_point(p, t).value)), w,
                        scaled_tol(1e-9), "h_of_axis_point");
    return w;
}

// h(-p_t - 2d/c) = (tk - t + 2)/(tk - t + k + 1), the image of the point
// mirrored through the pole.
inline Complex h_of_mirror_point(const HyperbolicProfile& p, double t) {
    const double den = t * p.k - t + p.k + 1.0;
    if (std::abs(den) < 1e-12) throw MapsToInfinity("mirror image at infinity");
    const Complex w((t * p.k - t + 2.0) / den, 0.0);
    const Complex mirrored = -axis_point(p, t).value - 2.0 * p.g.d / p.g.c;
    detail::cross_check(p.h_apply(ExtendedComplex(mirrored)), w, scaled_tol(1e-9),
                        "h_of_mirror_point");
    return w;
}

// h(-d/c) = 1/k.
inline Complex h_of_pole(const HyperbolicProfile& p) {
    const Complex w(1.0 / p.k, 0.0);
    detail::cross_check(p.h_apply(ExtendedComplex(p.pole())), w, scaled_tol(1e-9),
                        "h_of_pole");
    return w;
}

struct DistanceIdentities {
    double radius_sqrtk = 0.0;  // |alpha - beta|/(k - 1) = |(c beta + d)/c|
    double inv_c_abs = 0.0;     // sqrt(k) |alpha - beta|/(k - 1) = 1/|c|
};

inline DistanceIdentities distance_identities(const HyperbolicProfile& p) {
    const double gap = std::abs(p.alpha - p.beta);
    DistanceIdentities out;
    out.radius_sqrtk = gap / (p.k - 1.0);
    out.inv_c_abs = std::sqrt(p.k) * gap / (p.k - 1.0);
    return out;
}

} // namespace moebius
