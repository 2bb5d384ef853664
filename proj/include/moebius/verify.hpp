#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "moebius/dynamics.hpp"
#include "moebius/errors.hpp"
#include "moebius/hyperbolic.hpp"
#include "moebius/regions.hpp"
#include "moebius/rng.hpp"
#include "moebius/tolerances.hpp"

namespace moebius {
namespace verify {

enum class SuiteId {
    FixedPoints,
    Conjugation,
    RegionMapping,
    Nesting,
    CircleImages,
    AxisFormulas,
    Confinement,
    Shadowing,
    AvoidedInvariance,
    Escape,
    GrowthBound,
    MeanValue,
    Convergence,
};

inline const std::array<SuiteId, 13>& all_suites() {
    static const std::array<SuiteId, 13> ids = {
        SuiteId::FixedPoints,  SuiteId::Conjugation, SuiteId::RegionMapping,
        SuiteId::Nesting,      SuiteId::CircleImages, SuiteId::AxisFormulas,
        SuiteId::Confinement,  SuiteId::Shadowing,    SuiteId::AvoidedInvariance,
        SuiteId::Escape,       SuiteId::GrowthBound,  SuiteId::MeanValue,
        SuiteId::Convergence,
    };
    return ids;
}

inline const char* to_string(SuiteId id) {
    switch (id) {
        case SuiteId::FixedPoints: return "FixedPoints";
        case SuiteId::Conjugation: return "Conjugation";
        case SuiteId::RegionMapping: return "RegionMapping";
        case SuiteId::Nesting: return "Nesting";
        case SuiteId::CircleImages: return "CircleImages";
        case SuiteId::AxisFormulas: return "AxisFormulas";
        case SuiteId::Confinement: return "Confinement";
        case SuiteId::Shadowing: return "Shadowing";
        case SuiteId::AvoidedInvariance: return "AvoidedInvariance";
        case SuiteId::Escape: return "Escape";
        case SuiteId::GrowthBound: return "GrowthBound";
        case SuiteId::MeanValue: return "MeanValue";
        case SuiteId::Convergence: return "Convergence";
    }
    return "?";
}

inline SuiteId suite_from_string(const std::string& name) {
    for (SuiteId id : all_suites()) {
        if (name == to_string(id)) return id;
    }
    throw UnknownSuite("unknown suite: " + name);
}

struct SuiteReport {
    SuiteId id = SuiteId::FixedPoints;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_residual = 0.0;
    std::vector<std::string> witnesses;  // up to 10 failing-trial inputs
    double wall_time_s = 0.0;            // not part of the serialized report
    std::uint64_t seed = 0;
};

// Hyperbolic map with trace uniform in [2.1, 6], |c| uniform on [0.2, 2]
// with uniform angle, a area-uniform in a radius-3 disk; d and b complete
// the trace and the unit determinant. Always classifies hyperbolic.
inline MobiusMap random_hyperbolic_map(std::uint64_t seed) {
    SplitMix64 rng(seed);
    const double tr = rng.next_in(2.1, 6.0);
    const Complex c = std::polar(rng.next_in(0.2, 2.0), rng.next_angle());
    const Complex a = rng.next_in_disk(Complex(0, 0), 3.0);
    const Complex d = tr - a;
    const Complex b = (a * d - 1.0) / c;
    return normalize(a, b, c, d);
}

namespace detail {

using moebius::detail::epsilon_tilde_raw;

inline std::string describe_map(const MobiusMap& g) {
    std::ostringstream os;
    os.precision(17);
    os << "map a=(" << g.a.real() << "," << g.a.imag() << ") b=(" << g.b.real()
       << "," << g.b.imag() << ") c=(" << g.c.real() << "," << g.c.imag()
       << ") d=(" << g.d.real() << "," << g.d.imag() << ")";
    return os.str();
}

// Circumcircle of three points, via the standard complex-plane construction.
inline DiskSpec circumcircle(Complex z1, Complex z2, Complex z3) {
    const Complex w = (z3 - z1) / (z2 - z1);
    if (std::abs(w.imag()) < 1e-14) {
        throw ImageIsLine("circumcircle of collinear points");
    }
    const Complex center =
        (z2 - z1) * (w - std::norm(w)) / (2.0 * Complex(0.0, w.imag())) + z1;
    return DiskSpec{center, std::abs(z1 - center), DiskSense::Boundary};
}

} // namespace detail

struct CircleFit {
    DiskSpec disk;
    double residual = 0.0;  // max | |w_j - center| - radius | over the samples
};

// Maps n boundary samples of the circle through m and fits the image circle
// by averaging circumcircles of sample triples. Throws ImageIsLine when a
// sample comes within 1e-9 of the pole (the image would be a line).
inline CircleFit oracle_circle_image(const MobiusMap& m, const DiskSpec& spec,
                                     std::size_t n) {
    if (n < 16) throw HypothesisViolated("circle oracle needs n >= 16");
    std::vector<Complex> images;
    images.reserve(n);
    for (const Complex& z : sample_boundary(spec, n)) {
        if (!is_linear(m) && std::abs(z - pole(m)) < 1e-9) {
            throw ImageIsLine("boundary sample at the pole");
        }
        const ExtendedComplex w = apply(m, ExtendedComplex(z));
        if (w.is_infinity()) throw ImageIsLine("boundary sample mapped to infinity");
        images.push_back(w.value());
    }

    const std::size_t stride = n / 3;
    Complex center_sum(0.0, 0.0);
    double radius_sum = 0.0;
    for (std::size_t j = 0; j < stride; ++j) {
        const DiskSpec c = detail::circumcircle(images[j], images[j + stride],
                                                images[j + 2 * stride]);
        center_sum += c.center;
        radius_sum += c.radius;
    }
    CircleFit fit;
    fit.disk.center = center_sum / static_cast<double>(stride);
    fit.disk.radius = radius_sum / static_cast<double>(stride);
    fit.disk.sense = DiskSense::Boundary;
    for (const Complex& w : images) {
        fit.residual = std::max(
            fit.residual, std::abs(std::abs(w - fit.disk.center) - fit.disk.radius));
    }
    return fit;
}

// Outcome of one suite trial.
struct Trial {
    double residual = 0.0;
    bool failed = false;
    std::string witness;
};

namespace trials {

// ---- identity suites ------------------------------------------------------

inline Trial fixed_points(const MobiusMap& g, double tol) {
    const HyperbolicProfile p = profile(g);
    double r = 0.0;
    r = std::max(r, chordal_distance(apply(g, ExtendedComplex(p.alpha)),
                                     ExtendedComplex(p.alpha)));
    r = std::max(r, chordal_distance(apply(g, ExtendedComplex(p.beta)),
                                     ExtendedComplex(p.beta)));
    r = std::max(r, std::abs(derivative(g, ExtendedComplex(p.beta)) - Complex(p.k)) / p.k);
    r = std::max(r, std::abs(derivative(g, ExtendedComplex(p.alpha)) - Complex(1.0 / p.k)));
    r = std::max(r, std::abs((g.c * p.alpha + g.d) * (g.c * p.beta + g.d) - Complex(1.0)));
    const double sk = std::sqrt(p.k);
    r = std::max(r, std::abs(Complex(sk + 1.0 / sk) - g.trace()));
    // Vieta relations for the fixed-point quadratic
    r = std::max(r, std::abs(p.alpha + p.beta - (g.a - g.d) / g.c) /
                        std::max(1.0, std::abs((g.a - g.d) / g.c)));
    r = std::max(r, std::abs(p.alpha * p.beta + g.b / g.c) /
                        std::max(1.0, std::abs(g.b / g.c)));
    return Trial{r, r > tol, ""};
}

inline Trial conjugation(const MobiusMap& g, SplitMix64& rng, double tol) {
    const HyperbolicProfile p = profile(g);
    const MobiusMap m = compose(p.h, compose(g, p.h_inv));
    const double sk = std::sqrt(p.k);
    double r = std::max({std::abs(m.a - Complex(sk)), std::abs(m.b), std::abs(m.c),
                         std::abs(m.d - Complex(1.0 / sk))});
    // pointwise: h(g(z)) = k h(z) on the sphere
    for (int i = 0; i < 8; ++i) {
        const ExtendedComplex z(rng.next_in(-5, 5), rng.next_in(-5, 5));
        const ExtendedComplex lhs = p.h_apply(apply(g, z));
        const ExtendedComplex hz = p.h_apply(z);
        const ExtendedComplex rhs =
            hz.is_infinity() ? hz : ExtendedComplex(p.k * hz.value());
        r = std::max(r, chordal_distance(lhs, rhs));
    }
    return Trial{r, r > tol, ""};
}

inline Trial region_mapping(const MobiusMap& g, SplitMix64& rng, double tol) {
    const HyperbolicProfile p = profile(g);
    const double r = rng.next_in(0.1, 4.0);
    const double rs = r / std::abs(g.c);
    Trial out;

    // interior of S(r) maps into T(r) minus its center
    const Complex z = p.pole() +
                      std::polar(rs * (1.0 + 1e-6 + 3.0 * rng.next_double()),
                                 rng.next_angle());
    const ExtendedComplex w = apply(g, ExtendedComplex(z));
    if (!t_contains(p, r, w) || w == ExtendedComplex(g.a / g.c)) {
        out.failed = true;
        out.residual = 1.0;
    }

    // boundary of S(r) maps onto the boundary of T(r)
    const Complex zb = p.pole() + std::polar(rs, rng.next_angle());
    const ExtendedComplex wb = apply(g, ExtendedComplex(zb));
    const double res = wb.is_infinity()
                           ? 1.0
                           : std::abs(std::abs(wb.value() - g.a / g.c) -
                                      1.0 / (r * std::abs(g.c)));
    out.residual = std::max(out.residual, res);
    out.failed = out.failed || res > tol;
    return out;
}

inline Trial nesting(const MobiusMap& g, SplitMix64& rng, double tol) {
    const HyperbolicProfile p = profile(g);
    const double tr = p.trace();
    const double lo = (tr - std::sqrt(tr * tr - 4.0)) / 2.0;
    const double hi = (tr + std::sqrt(tr * tr - 4.0)) / 2.0;
    const double r = lo + (0.05 + 0.9 * rng.next_double()) * (hi - lo);

    Trial out;
    const double margin = closure_nesting_margin(p, r);
    if (!(margin > 0.0)) {
        out.failed = true;
        out.residual = std::max(out.residual, -margin);
    }

    // the tau/2 disk strictly contains the unit-radius disk
    if (!((tr / 2.0) / std::abs(g.c) > 1.0 / std::abs(g.c))) out.failed = true;

    // closed T(r) sample points belong to S(r), with at least the margin
    const Complex center = g.a / g.c;
    const double t_rad = 1.0 / (r * std::abs(g.c));
    for (int j = 0; j < 16; ++j) {
        const double rho = j == 0 ? t_rad : t_rad * std::sqrt(rng.next_double());
        const Complex z = center + std::polar(rho, rng.next_angle());
        if (!s_contains(p, r, ExtendedComplex(z))) {
            out.failed = true;
            out.residual = std::max(out.residual, 1.0);
        }
        const double slack = std::abs(z - p.pole()) - r / std::abs(g.c);
        if (slack < margin - 1e-9) {
            out.failed = true;
            out.residual = std::max(out.residual, margin - slack);
        }
    }
    return out;
}

inline Trial circle_images(const MobiusMap& g, double tol) {
    const HyperbolicProfile p = profile(g);
    Trial out;
    auto check = [&](double radius_in_r, const DiskSpec& closed_form) {
        const DiskSpec src{p.pole(), radius_in_r / std::abs(g.c), DiskSense::Boundary};
        const CircleFit fit = oracle_circle_image(p.h, src, 64);
        out.residual = std::max(out.residual, std::abs(fit.disk.center - closed_form.center));
        out.residual = std::max(out.residual, std::abs(fit.disk.radius - closed_form.radius));
        out.residual = std::max(out.residual, fit.residual);
    };
    check(1.0 / std::sqrt(p.k), image_circle_sqrtk(p));
    check(1.0 + p.tau / 2.0, image_circle_tau_half(p));
    out.failed = out.residual > tol;
    return out;
}

inline Trial axis_formulas(const MobiusMap& g, SplitMix64& rng, double tol) {
    const HyperbolicProfile p = profile(g);
    double r = 0.0;

    // h(pole) = 1/k
    r = std::max(r, chordal_distance(p.h_apply(ExtendedComplex(p.pole())),
                                     ExtendedComplex(Complex(1.0 / p.k, 0.0))));

    auto sample_t = [&]() {
        double t;
        do {
            t = rng.next_in(-3.0, 4.0);
        } while (std::abs(t - 1.0) < 0.05 ||
                 std::abs(t * p.k - t + p.k + 1.0) < 0.05);
        return t;
    };

    const double specials[] = {0.0, 0.5, 2.0};
    for (int i = 0; i < 8; ++i) {
        const double t = i < 3 ? specials[i] : sample_t();
        const Complex pt = axis_point(p, t).value;

        const Complex axis_formula(t / (t - 1.0), 0.0);
        r = std::max(r, chordal_distance(p.h_apply(ExtendedComplex(pt)),
                                         ExtendedComplex(axis_formula)));

        const double den = t * p.k - t + p.k + 1.0;
        const Complex mirror_formula((t * p.k - t + 2.0) / den, 0.0);
        const Complex mirrored = -pt - 2.0 * g.d / g.c;
        r = std::max(r, chordal_distance(p.h_apply(ExtendedComplex(mirrored)),
                                         ExtendedComplex(mirror_formula)));

        // line invariance and realness of h on the line
        const ExtendedComplex image = apply(g, ExtendedComplex(pt));
        if (!image.is_infinity()) {
            const Complex w = (image.value() - p.beta) / (p.alpha - p.beta);
            r = std::max(r, std::abs(w.imag()) / std::max(1.0, std::abs(w)));
        }
        const ExtendedComplex hw = p.h_apply(ExtendedComplex(pt));
        if (!hw.is_infinity()) {
            r = std::max(r, std::abs(hw.value().imag()) /
                                std::max(1.0, std::abs(hw.value())));
        }
    }

    // Cor 4.4 specials: t = 0 and t = 1/2 mirror images
    r = std::max(r, std::abs(h_of_mirror_point(p, 0.0) - Complex(2.0 / (p.k + 1.0))));
    r = std::max(r, std::abs(h_of_mirror_point(p, 0.5) -
                             Complex((p.k + 3.0) / (3.0 * p.k + 1.0))));
    return Trial{r, r > tol, ""};
}

// ---- dynamical suites -----------------------------------------------------

struct ConfinementSetup {
    HyperbolicProfile p;
    double t = 0.0;
    double eps = 0.0;
    ExtendedComplex z0;
};

inline ConfinementSetup confinement_setup(const MobiusMap& g, SplitMix64& rng,
                                          double eps_scale) {
    ConfinementSetup s{profile(g), 0.0, 0.0, ExtendedComplex(0.0)};
    s.t = s.p.tau * (0.05 + 0.95 * rng.next_double());
    s.eps = eps_scale * s.t / (std::abs(g.c) * (1.0 + s.t));
    const double boundary = (1.0 + s.t) / std::abs(g.c);
    s.z0 = ExtendedComplex(s.p.pole() +
                           std::polar(boundary * (1.0 + 1e-9 + 3.0 * rng.next_double()),
                                      rng.next_angle()));
    return s;
}

// Returns the worst incursion depth into the complement of S(1+t); zero
// exits means the orbit stayed confined.
inline Trial confinement(const MobiusMap& g, std::uint64_t seed, SplitMix64& rng,
                         std::size_t steps, double eps_scale,
                         PerturbationKind kind) {
    const ConfinementSetup s = confinement_setup(g, rng, eps_scale);
    const PerturbationModel model{kind, s.eps, seed};
    const OrbitRecord rec = perturbed_orbit(g, s.z0, steps, model);
    Trial out;
    const double boundary = (1.0 + s.t) / std::abs(g.c);
    for (const ExtendedComplex& a : rec.points) {
        if (!s_contains(s.p, 1.0 + s.t, a)) {
            out.failed = true;
            const double depth = a.is_infinity()
                                     ? boundary
                                     : boundary - std::abs(a.value() - s.p.pole());
            out.residual = std::max(out.residual, depth);
        }
    }
    if (rec.truncated()) out.failed = true;
    return out;
}

inline Trial shadowing(const MobiusMap& g, std::uint64_t seed, SplitMix64& rng,
                       std::size_t steps) {
    const ConfinementSetup s = confinement_setup(g, rng, 0.9);
    const PerturbationModel model{PerturbationKind::BoundaryAdversarial, s.eps, seed};
    OrbitRecord rec = perturbed_orbit(g, s.z0, steps, model);
    Trial out;
    if (rec.truncated()) {
        out.failed = true;
        out.residual = 1.0;
        return out;
    }
    rec.t = s.t;
    shadow_orbit(g, rec);
    const double K = contraction_constant(s.t);
    const double limit = s.eps / (1.0 - K);
    for (std::size_t i = 0; i < rec.deviation.size(); ++i) {
        const double excess =
            rec.deviation[i] - std::min(rec.bound[i], limit) - 1e-12;
        if (excess > 0.0) {
            out.failed = true;
            out.residual = std::max(out.residual, excess);
        }
    }
    return out;
}

// One adversarial dilation run against the avoided region. start_inside
// flips the construction to the expected-failure variant; the return then
// reports how many orbit points landed inside.
inline Trial avoided_invariance(std::uint64_t seed, SplitMix64& rng,
                                std::size_t steps, bool start_inside) {
    const double tr = rng.next_in(2.1, 6.0);
    const double root = std::sqrt(tr * tr - 4.0);
    const double k = (tr + root) * (tr + root) / 4.0;
    const double delta = 0.5 * (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
    const AvoidedRegionW region(k, delta);
    const double band = region.band(1.0);

    Complex w0;
    if (start_inside) {
        // on the backward orbit segment of 1, or at the repeller itself
        w0 = rng.next_double() < 0.25 ? Complex(0.0, 0.0)
                                      : Complex(rng.next_double() / k, 0.0);
    } else {
        const double margin = band * (0.01 + rng.next_double());
        switch (seed % 3) {
            case 0:  // just outside the half disk at the origin
                w0 = std::polar(region.band(region.t1) + margin,
                                1.5707963267948966 + 3.141592653589793 * rng.next_double());
                break;
            case 1:  // above or below the strip
                w0 = Complex(rng.next_in(0.1 / k, 1.0 / k),
                             (band + margin) * (rng.next_double() < 0.5 ? 1.0 : -1.0));
                break;
            default:  // beyond the half disk at 1/k
                w0 = Complex(1.0 / k, 0.0) +
                     std::polar(band + margin,
                                -1.5707963267948966 + 3.141592653589793 * rng.next_double());
                break;
        }
    }

    Trial out;
    if (!start_inside && avoided_w_contains(region, w0)) {
        out.failed = true;  // sampling bug, count loudly
        out.residual = 1.0;
        return out;
    }

    const PerturbationModel model{PerturbationKind::BoundaryAdversarial, delta, seed};
    const std::vector<Complex> orbit = perturbed_dilation_orbit(k, w0, steps, model);

    std::size_t entries = 0;
    for (std::size_t i = 1; i < orbit.size(); ++i) {
        if (avoided_w_contains(region, orbit[i])) ++entries;
    }

    // piece-level transition checks along the same orbit
    const double b1 = region.band(region.t1);
    for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
        const Complex cur = orbit[i];
        const Complex nxt = orbit[i + 1];
        // outside the band-disk at 0 stays outside
        if (std::abs(cur) > b1 && !(std::abs(nxt) > b1)) out.failed = true;
        // outside the horizontal band stays outside
        if (std::abs(cur.imag()) > band && !(std::abs(nxt.imag()) > band)) {
            out.failed = true;
        }
        // left half plane, outside the disk: crossing to Re >= 0 must clear the band
        if (cur.real() <= 0.0 && std::abs(cur) > b1 && nxt.real() >= 0.0) {
            if (!(std::abs(nxt.imag()) > band)) out.failed = true;
        }
        // right of 1/k, outside the half disk at 1/k: stays outside it
        if (cur.real() >= 1.0 / k && std::abs(cur - Complex(1.0 / k, 0.0)) > band) {
            if (std::abs(nxt - Complex(1.0 / k, 0.0)) <= band &&
                nxt.real() >= 1.0 / k) {
                out.failed = true;
            }
        }
    }

    if (start_inside) {
        out.residual = static_cast<double>(entries);
        out.failed = false;  // this variant only reports entries
    } else if (entries > 0) {
        out.failed = true;
        out.residual = static_cast<double>(entries);
    }
    return out;
}

struct EscapeOutcome {
    long empirical = -1;
    int bound = 0;
};

inline EscapeOutcome escape_once(const HyperbolicProfile& p, double delta,
                                 std::uint64_t seed, SplitMix64& rng) {
    const DiskSpec disk = image_circle_tau_half(p);
    Complex w0;
    do {
        w0 = disk.center +
             std::polar(disk.radius * std::sqrt(rng.next_double()), rng.next_angle());
    } while (!escape_region_w_contains(p, delta, w0));

    EscapeOutcome out;
    out.bound = escape_time_bound(p, delta);
    const PerturbationModel model{PerturbationKind::BoundaryAdversarial, delta, seed};
    const std::vector<Complex> orbit = perturbed_dilation_orbit(
        p.k, w0, static_cast<std::size_t>(out.bound) + 10, model);
    out.empirical = empirical_escape_step(p, delta, orbit);
    return out;
}

inline Trial escape(const MobiusMap& g, std::uint64_t seed, SplitMix64& rng) {
    const HyperbolicProfile p = profile(g);
    const double delta = 0.3 * (1.0 - 1.0 / p.k) * (1.0 - 1.0 / p.k);
    const EscapeOutcome out = escape_once(p, delta, seed, rng);
    Trial t;
    if (out.empirical < 0 || out.empirical > out.bound) {
        t.failed = true;
        t.residual = static_cast<double>(out.empirical - out.bound);
    }
    return t;
}

// Pre-escape growth and post-escape combined bound along one perturbed
// orbit started in the exterior zone (E_f pulled back, avoided part cut).
inline Trial growth_bound(const MobiusMap& g, std::uint64_t seed, SplitMix64& rng,
                          std::size_t steps) {
    const HyperbolicProfile p = profile(g);
    const double delta = 0.5 * (1.0 - 1.0 / p.k) * (1.0 - 1.0 / p.k);
    const AvoidedRegionW region(p.k, delta);
    const BoundSet bs = make_bound_set(p, delta, p.tau / 2.0);

    // Cor 7.2 route: the sampled derivative bound 2 sup|g'| outside the
    // avoided region must stay below the printed M.
    Trial out;
    const DiskSpec disk = image_circle_tau_half(p);
    double sampled_sup = 0.0;
    for (int i = 0; i < 64; ++i) {
        const Complex w = disk.center +
                          std::polar(disk.radius * std::sqrt(rng.next_double()),
                                     rng.next_angle());
        if (avoided_w_contains(region, w)) continue;
        const ExtendedComplex z = p.h_inv_apply(ExtendedComplex(w));
        if (z.is_infinity()) continue;
        if (std::abs(z.value() - p.pole()) < kPoleSnapRadius) continue;
        sampled_sup = std::max(sampled_sup,
                               2.0 * std::abs(derivative(g, ExtendedComplex(z.value()))));
    }
    if (sampled_sup > bs.M * (1.0 + scaled_tol(1e-6))) {
        out.failed = true;
        out.residual = sampled_sup / bs.M - 1.0;
        return out;
    }

    // start point in the exterior zone
    Complex w0;
    do {
        w0 = disk.center +
             std::polar(disk.radius * 0.98 * std::sqrt(rng.next_double()),
                        rng.next_angle());
    } while (!escape_region_w_contains(p, delta, w0) ||
             avoided_w_contains(region, w0));
    const ExtendedComplex z0 = p.h_inv_apply(ExtendedComplex(w0));
    if (z0.is_infinity()) return out;

    const double t = p.tau * (0.05 + 0.95 * rng.next_double());
    const double eps =
        std::min({0.9 * t / (std::abs(g.c) * (1.0 + t)),
                  0.9 * (p.tau / 2.0) / (std::abs(g.c) * (1.0 + p.tau / 2.0)),
                  transfer_epsilon(p, delta)});

    const PerturbationModel model{PerturbationKind::BoundaryAdversarial, eps, seed};
    OrbitRecord rec = perturbed_orbit(g, z0, steps, model);
    if (rec.truncated()) {
        out.failed = true;
        out.residual = 1.0;
        return out;
    }
    rec.delta = delta;
    shadow_orbit(g, rec);
    for (std::size_t i = 0; i < rec.deviation.size(); ++i) {
        const double bound = combined_bound(bs, eps, i);
        const double excess = rec.deviation[i] - bound * (1.0 + 1e-12) - 1e-12;
        if (excess > 0.0) {
            out.failed = true;
            out.residual = std::max(out.residual, excess);
        }
    }
    return out;
}

inline Trial mean_value(const MobiusMap& g, SplitMix64& rng) {
    const HyperbolicProfile p = profile(g);
    // convex disk B at positive distance from the pole
    const double radius = rng.next_in(0.05, 1.5);
    const double clearance = radius + rng.next_in(0.05, 2.0);
    const Complex center = p.pole() + std::polar(clearance, rng.next_angle());

    // sampled sup of |g'| over B: random points plus the analytic argmax,
    // the boundary point nearest the pole
    double sup = 0.0;
    auto visit = [&](Complex z) {
        sup = std::max(sup, std::abs(derivative(g, ExtendedComplex(z))));
    };
    const Complex toward_pole = (p.pole() - center) / std::abs(p.pole() - center);
    visit(center + radius * (1.0 - 1e-12) * toward_pole);
    for (int i = 0; i < 100; ++i) visit(rng.next_in_disk(center, radius));

    Trial out;
    for (int i = 0; i < 16; ++i) {
        const Complex u = rng.next_in_disk(center, radius);
        const Complex v = rng.next_in_disk(center, radius);
        if (std::abs(u - v) < 1e-9 * radius) continue;
        const Complex gu = apply(g, ExtendedComplex(u)).value();
        const Complex gv = apply(g, ExtendedComplex(v)).value();
        const double ratio = std::abs(gu - gv) / std::abs(u - v);
        const double excess = ratio - 2.0 * sup * (1.0 + scaled_tol(1e-6));
        if (excess > 0.0) {
            out.failed = true;
            out.residual = std::max(out.residual, excess);
        }
    }
    return out;
}

inline Trial convergence(const MobiusMap& g, SplitMix64& rng, double tol) {
    const HyperbolicProfile p = profile(g);
    const int n =
        static_cast<int>(std::ceil(std::log(1e-8) / std::log(1.0 / p.k))) + 20;
    Trial out;

    auto sample_away_from = [&](const Complex& avoid) {
        for (;;) {
            ExtendedComplex z = rng.next_double() < 0.05
                                    ? ExtendedComplex::infinity()
                                    : ExtendedComplex(rng.next_in(-8, 8),
                                                      rng.next_in(-8, 8));
            if (chordal_distance(z, ExtendedComplex(avoid)) > 0.1) return z;
        }
    };

    ExtendedComplex z = sample_away_from(p.beta);
    for (int j = 0; j < n; ++j) z = apply(g, z);
    out.residual = chordal_distance(z, ExtendedComplex(p.alpha));

    const MobiusMap gi = inverse(g);
    ExtendedComplex zb = sample_away_from(p.alpha);
    for (int j = 0; j < n; ++j) zb = apply(gi, zb);
    out.residual = std::max(out.residual, chordal_distance(zb, ExtendedComplex(p.beta)));

    out.failed = out.residual > tol;
    return out;
}

} // namespace trials

namespace detail {

// MOEBIUS_HUS_THREADS sets the worker count for suite trials (default 1).
// Results are identical at any level: per-trial seeds are derived
// independently and merged in trial order.
inline unsigned suite_threads() {
    static const unsigned n = [] {
        const char* env = std::getenv("MOEBIUS_HUS_THREADS");
        if (!env) return 1u;
        const long v = std::atol(env);
        if (v < 1) return 1u;
        return static_cast<unsigned>(std::min(v, 64L));
    }();
    return n;
}

template <typename Fn>
std::vector<Trial> run_trials(std::size_t trials, Fn&& fn, unsigned requested) {
    std::vector<Trial> results(trials);
    const unsigned workers = std::min<std::size_t>(
        requested == 0 ? suite_threads() : requested, trials == 0 ? 1 : trials);
    if (workers <= 1) {
        for (std::size_t i = 0; i < trials; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::future<void>> futures;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) break;
        futures.push_back(std::async(std::launch::async, [lo, hi, &results, &fn] {
            for (std::size_t i = lo; i < hi; ++i) results[i] = fn(i);
        }));
    }
    for (auto& f : futures) f.get();
    return results;
}

inline SuiteReport reduce(SuiteId id, std::uint64_t seed,
                          const std::vector<Trial>& results, double wall_s) {
    SuiteReport report;
    report.id = id;
    report.seed = seed;
    report.trials = results.size();
    report.wall_time_s = wall_s;
    for (std::size_t i = 0; i < results.size(); ++i) {
        report.worst_residual = std::max(report.worst_residual, results[i].residual);
        if (results[i].failed) {
            ++report.failures;
            if (report.witnesses.size() < 10) {
                std::ostringstream os;
                os << "trial " << i;
                if (!results[i].witness.empty()) os << ": " << results[i].witness;
                report.witnesses.push_back(os.str());
            }
        }
    }
    return report;
}

} // namespace detail

// Runs the named suite: `trials` independent draws keyed off `seed`, the
// per-suite invariant checked at its stated tolerance. Deterministic given
// (id, trials, seed) at any MOEBIUS_HUS_THREADS setting; `workers` = 0
// defers to that variable.
inline SuiteReport run_suite(SuiteId id, std::size_t trials, std::uint64_t seed,
                             unsigned workers = 0) {
    if (trials < 1) throw HypothesisViolated("run_suite needs trials >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    auto trial_fn = [&](std::size_t i) -> Trial {
        const std::uint64_t trial_seed = SplitMix64::derived(seed, i).next_u64();
        SplitMix64 rng = SplitMix64::derived(trial_seed, 0x5eedu);
        const MobiusMap g = random_hyperbolic_map(trial_seed);
        Trial t;
        switch (id) {
            case SuiteId::FixedPoints:
                t = trials::fixed_points(g, scaled_tol(1e-8));
                break;
            case SuiteId::Conjugation:
                t = trials::conjugation(g, rng, scaled_tol(1e-8));
                break;
            case SuiteId::RegionMapping:
                t = trials::region_mapping(g, rng, scaled_tol(1e-9));
                break;
            case SuiteId::Nesting:
                t = trials::nesting(g, rng, scaled_tol(1e-9));
                break;
            case SuiteId::CircleImages:
                t = trials::circle_images(g, scaled_tol(1e-9));
                break;
            case SuiteId::AxisFormulas:
                t = trials::axis_formulas(g, rng, scaled_tol(1e-8));
                break;
            case SuiteId::Confinement:
                t = trials::confinement(g, trial_seed, rng, 1000, 0.9,
                                        PerturbationKind::BoundaryAdversarial);
                break;
            case SuiteId::Shadowing:
                t = trials::shadowing(g, trial_seed, rng, 1000);
                break;
            case SuiteId::AvoidedInvariance:
                t = trials::avoided_invariance(trial_seed, rng, 100, false);
                break;
            case SuiteId::Escape:
                t = trials::escape(g, trial_seed, rng);
                break;
            case SuiteId::GrowthBound:
                t = trials::growth_bound(g, trial_seed, rng, 1000);
                break;
            case SuiteId::MeanValue:
                t = trials::mean_value(g, rng);
                break;
            case SuiteId::Convergence:
                t = trials::convergence(g, rng, scaled_tol(1e-6));
                break;
        }
        if (t.failed && t.witness.empty()) t.witness = detail::describe_map(g);
        return t;
    };

    const std::vector<Trial> results = detail::run_trials(trials, trial_fn, workers);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return detail::reduce(id, seed, results, wall);
}

// Expected-failure smoke variants: the hypotheses are deliberately broken,
// and a healthy implementation must register violations.

// Confinement with triple the eps cap and outward pushes: returns the
// number of trials that exited S(1+t). Must be positive. Orbits are
// started at the vulnerable spot: the preimage of the T(1+t) boundary
// point nearest the pole, where the outward push points at the pole ball.
// (From generic starts the outward push points away from the ball and the
// cap violation stays invisible at any trial count.)
inline std::size_t confinement_violation_count(std::size_t trials, std::uint64_t seed) {
    std::size_t exits = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t trial_seed = SplitMix64::derived(seed, i).next_u64();
        SplitMix64 rng = SplitMix64::derived(trial_seed, 0x5eedu);
        const MobiusMap g = random_hyperbolic_map(trial_seed);
        const HyperbolicProfile p = profile(g);
        const double t = p.tau * (0.05 + 0.95 * rng.next_double());
        const double eps = 3.0 * t / (std::abs(g.c) * (1.0 + t));

        const Complex center_t = g.a / g.c;
        const Complex toward_pole = (p.pole() - center_t) / std::abs(p.pole() - center_t);
        const double t_radius = 1.0 / ((1.0 + t) * std::abs(g.c));
        const Complex w_in = center_t + toward_pole * t_radius * (1.0 - 1e-9);
        const ExtendedComplex z0 = apply(inverse(g), ExtendedComplex(w_in));
        if (z0.is_infinity() || !s_contains(p, 1.0 + t, z0)) continue;

        const PerturbationModel model{PerturbationKind::RadialOutward, eps, trial_seed};
        const OrbitRecord rec = perturbed_orbit(g, z0, 1000, model);
        bool exited = rec.truncated();
        for (const ExtendedComplex& a : rec.points) {
            if (!s_contains(p, 1.0 + t, a)) exited = true;
        }
        if (exited) ++exits;
    }
    return exits;
}

// Avoided-region runs started inside the region: returns how many orbit
// points across all trials landed in it. Must be positive.
inline std::size_t avoided_entries_from_inside(std::size_t trials, std::uint64_t seed) {
    std::size_t entries = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t trial_seed = SplitMix64::derived(seed, i).next_u64();
        SplitMix64 rng = SplitMix64::derived(trial_seed, 0x5eedu);
        const Trial t = trials::avoided_invariance(trial_seed, rng, 100, true);
        entries += static_cast<std::size_t>(t.residual);
    }
    return entries;
}

} // namespace verify
} // namespace moebius
