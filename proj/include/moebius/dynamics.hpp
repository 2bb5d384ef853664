#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/hyperbolic.hpp"
#include "moebius/regions.hpp"
#include "moebius/rng.hpp"
#include "moebius/tolerances.hpp"

namespace moebius {

// A perturbed point closer to the pole than this is mapped to infinity
// outright; the avoided-region machinery exists to keep orbits away from
// here, and the simulator surfaces the event instead of masking it.
inline constexpr double kPoleSnapRadius = 1e-12;

enum class PerturbationKind { None, UniformDisk, BoundaryAdversarial, RadialOutward };

// Per-step noise model. Every emitted perturbation eta satisfies
// |eta| <= eps; BoundaryAdversarial emits |eta| = eps exactly, RadialOutward
// pushes straight away from the attracting fixed point. Draws are keyed by
// (seed, step index), so records are reproducible bit for bit and
// independent of evaluation order.
struct PerturbationModel {
    PerturbationKind kind = PerturbationKind::None;
    double eps = 0.0;
    std::uint64_t seed = 0;
};

// Which stability regime a point sits in. Escaped = none of the other
// three (at infinity, or in the removed-ball sliver near the repeller).
enum class OrbitRegion { S, Exterior, Avoided, Escaped };

inline const char* to_string(OrbitRegion r) {
    switch (r) {
        case OrbitRegion::S: return "S";
        case OrbitRegion::Exterior: return "Exterior";
        case OrbitRegion::Avoided: return "Avoided";
        case OrbitRegion::Escaped: return "Escaped";
    }
    return "?";
}

// One simulated orbit with everything attached to it: perturbation sizes,
// the shadow orbit, per-step deviations and bound values, region labels.
// eps/t/delta echo the configuration the record was produced with.
struct OrbitRecord {
    std::vector<ExtendedComplex> points;   // a_0 .. a_n (shorter if truncated)
    std::vector<double> eta_abs;           // |eta_i| for step i -> i+1
    std::vector<ExtendedComplex> shadow;   // b_i, filled by shadow_orbit
    std::vector<double> deviation;         // |a_i - b_i|
    std::vector<double> bound;             // per-step bound on the deviation
    std::vector<OrbitRegion> region;       // per-point label, see annotate_regions

    double eps = 0.0;
    double t = 0.0;        // confinement parameter; 0 = pick tau
    double delta = 0.0;    // dilation-noise level; 0 = pick a default
    long hit_infinity_at = -1;

    bool truncated() const { return hit_infinity_at >= 0; }
};

namespace detail {

inline Complex draw_eta(const PerturbationModel& model, std::uint64_t step,
                        Complex image, const Complex* attractor) {
    switch (model.kind) {
        case PerturbationKind::None:
            return Complex(0.0, 0.0);
        case PerturbationKind::UniformDisk: {
            SplitMix64 rng = SplitMix64::derived(model.seed, step);
            const double r = model.eps * std::sqrt(rng.next_double());
            return std::polar(r, rng.next_angle());
        }
        case PerturbationKind::BoundaryAdversarial: {
            SplitMix64 rng = SplitMix64::derived(model.seed, step);
            return std::polar(model.eps, rng.next_angle());
        }
        case PerturbationKind::RadialOutward: {
            const Complex dir = image - *attractor;
            const double len = std::abs(dir);
            if (len == 0.0) return Complex(model.eps, 0.0);
            return model.eps * dir / len;
        }
    }
    return Complex(0.0, 0.0);
}

} // namespace detail

// Unperturbed iteration b_{i+1} = g(b_i), total on the sphere; passes
// through infinity cleanly if the orbit hits the pole.
inline OrbitRecord exact_orbit(const MobiusMap& g, const ExtendedComplex& z0,
                               std::size_t n) {
    OrbitRecord rec;
    rec.points.reserve(n + 1);
    rec.points.push_back(z0);
    for (std::size_t i = 0; i < n; ++i) {
        rec.points.push_back(apply(g, rec.points.back()));
        rec.eta_abs.push_back(0.0);
    }
    return rec;
}

// a_{i+1} = g(a_i) + eta_i with eta drawn per model. Perturbation is added
// only when the image is finite; if an iterate reaches infinity (a point
// within kPoleSnapRadius of the pole counts) the record stops there and
// hit_infinity_at marks the index.
inline OrbitRecord perturbed_orbit(const MobiusMap& g, const ExtendedComplex& z0,
                                   std::size_t n, const PerturbationModel& model) {
    std::optional<Complex> attractor;
    if (model.kind == PerturbationKind::RadialOutward) {
        attractor = profile(g).alpha;  // throws unless hyperbolic with c != 0
    }

    OrbitRecord rec;
    rec.eps = model.eps;
    rec.points.reserve(n + 1);
    rec.points.push_back(z0);
    for (std::size_t i = 0; i < n; ++i) {
        const ExtendedComplex& cur = rec.points.back();
        ExtendedComplex image;
        if (!cur.is_infinity() && !is_linear(g) &&
            std::abs(cur.value() - pole(g)) < kPoleSnapRadius) {
            image = ExtendedComplex::infinity();
        } else {
            image = apply(g, cur);
        }
        if (image.is_infinity()) {
            rec.points.push_back(image);
            rec.eta_abs.push_back(0.0);
            rec.hit_infinity_at = static_cast<long>(i + 1);
            return rec;
        }
        const Complex eta =
            detail::draw_eta(model, i, image.value(), attractor ? &*attractor : nullptr);
        const ExtendedComplex next(image.value() + eta);
        rec.points.push_back(next);
        rec.eta_abs.push_back(std::abs(eta));
        if (next.is_infinity()) {
            rec.hit_infinity_at = static_cast<long>(i + 1);
            return rec;
        }
    }
    return rec;
}

// Lipschitz constant of g on S(1 + t): K = 1/(1 + t)^2.
inline double contraction_constant(double t) {
    if (!(t > 0.0)) throw HypothesisViolated("contraction constant needs t > 0");
    return 1.0 / ((1.0 + t) * (1.0 + t));
}

// Deviation bound of the shadow orbit after i steps of a K-contraction:
// K^i d0 + (1 - K^i)/(1 - K) eps.
inline double shadow_bound(double K, double eps, double d0, std::size_t i) {
    const double Ki = std::pow(K, static_cast<double>(i));
    return Ki * d0 + (1.0 - Ki) / (1.0 - K) * eps;
}

// M = 2 (k-1)^4 / (k^3 delta^2), twice the derivative bound outside the
// avoided region. Verified against |g'| sampled on the boundary of the
// inscribed pole disk, where the bound is tight.
inline double expansion_constant(const HyperbolicProfile& p, double delta) {
    if (!(delta > 0.0)) throw DeltaTooLarge("expansion constant needs delta > 0");
    const double k = p.k;
    const double km1 = k - 1.0;
    const double M = 2.0 * km1 * km1 * km1 * km1 / (k * k * k * delta * delta);
    if (!(M > 1.0)) throw DeltaTooLarge("delta too large: expansion constant M <= 1");
    if (delta < km1 * km1 / k) {
        const double eps_tilde = detail::epsilon_tilde_raw(p, delta);
        const DiskSpec rim{p.pole(), eps_tilde, DiskSense::Boundary};
        const double slack = 1.0 + scaled_tol(1e-6);
        for (const Complex& z : sample_boundary(rim, 64)) {
            const double two_gp = 2.0 * std::abs(derivative(p.g, ExtendedComplex(z)));
            if (two_gp > M * slack) {
                throw CrossCheckFailed("sampled 2|g'| exceeds the expansion constant");
            }
        }
    }
    return M;
}

// Smallest integer N with N > log((1/delta) ((k+3)/(3k+1) + 1) + 1) / log k:
// a uniform escape time from the w-plane region E_f.
inline int escape_time_bound(const HyperbolicProfile& p, double delta) {
    const double k = p.k;
    const double gate = (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
    if (!(delta > 0.0) || !(delta < gate)) {
        throw DeltaTooLarge("escape time needs 0 < delta < (1 - 1/k)^2");
    }
    const double y = (k + 3.0) / (3.0 * k + 1.0);
    const double expr = std::log((y + 1.0) / delta + 1.0) / std::log(k);
    return static_cast<int>(std::floor(expr)) + 1;
}

// Simplified variant N0 > log(2/delta + 1) / log k, valid since
// (k+3)/(3k+1) < 1 for k > 1.
inline int escape_time_bound_simplified(const HyperbolicProfile& p, double delta) {
    const double k = p.k;
    const double gate = (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
    if (!(delta > 0.0) || !(delta < gate)) {
        throw DeltaTooLarge("escape time needs 0 < delta < (1 - 1/k)^2");
    }
    const double expr = std::log(2.0 / delta + 1.0) / std::log(k);
    return static_cast<int>(std::floor(expr)) + 1;
}

// eps such that h(B(z, eps)) fits inside B(h(z), delta) for z anywhere on
// the closed disk complementing S(1 + tau/2): eps = delta / (2 sup|h'|),
// with sup|h'| sampled over that disk inflated by eps~/2 (512 boundary
// points plus a 512-point polar grid). Sampling-accuracy caveat applies;
// |h'| = |alpha - beta| / |z - alpha|^2 varies slowly there.
inline double transfer_epsilon(const HyperbolicProfile& p, double delta) {
    if (!(delta > 0.0)) throw DeltaTooLarge("transfer epsilon needs delta > 0");
    const double radius = (1.0 + p.tau / 2.0) / std::abs(p.g.c) +
                          detail::epsilon_tilde_raw(p, delta) / 2.0;
    const Complex center = p.pole();
    const double gap = std::abs(p.alpha - p.beta);
    double sup = 0.0;
    auto visit = [&](Complex z) {
        const double dist2 = std::norm(z - p.alpha);
        if (dist2 > 0.0) sup = std::max(sup, gap / dist2);
    };
    const DiskSpec rim{center, radius, DiskSense::Boundary};
    for (const Complex& z : sample_boundary(rim, 512)) visit(z);
    for (int ir = 0; ir < 16; ++ir) {
        const double r = radius * static_cast<double>(ir + 1) / 16.0;
        for (int ia = 0; ia < 32; ++ia) {
            const double th = 6.283185307179586476925286766559 * ia / 32.0;
            visit(center + std::polar(r, th));
        }
    }
    return delta / (2.0 * sup);
}

// Constants of the combined two-regime deviation bound.
struct BoundSet {
    double K = 0.0;          // contraction constant, 0 < K < 1
    double M = 0.0;          // expansion constant, M > 1
    int N = 0;               // escape-time bound, N >= 1
    double coeff_growth = 0.0;  // (M^N - 1)/(M - 1)
    double coeff_tail = 0.0;    // 1/(1 - K)
};

inline BoundSet make_bound_set(const HyperbolicProfile& p, double delta, double t) {
    BoundSet bs;
    bs.K = contraction_constant(t);
    bs.M = expansion_constant(p, delta);
    bs.N = escape_time_bound(p, delta);
    bs.coeff_growth =
        (std::pow(bs.M, static_cast<double>(bs.N)) - 1.0) / (bs.M - 1.0);
    bs.coeff_tail = 1.0 / (1.0 - bs.K);
    return bs;
}

// Deviation bound valid on the complement of the avoided region:
// geometric growth (M^i - 1)/(M - 1) eps up to the escape time, then the
// saturated escape-plus-contraction expression.
inline double combined_bound(const BoundSet& bs, double eps, std::size_t i) {
    const double n = static_cast<double>(bs.N);
    const double di = static_cast<double>(i);
    if (di <= n) {
        return (std::pow(bs.M, di) - 1.0) / (bs.M - 1.0) * eps;
    }
    return (bs.coeff_growth + (1.0 - std::pow(bs.K, di - n)) / (1.0 - bs.K)) * eps;
}

// delta used for region annotation and bound sets when the caller did not
// fix one: comfortably below the avoided-region gate.
inline double default_delta(double k) {
    const double gate = (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
    return std::min(0.01, 0.5 * gate);
}

// Attaches the exact orbit b_0 = a_0, b_{i+1} = g(b_i) to a perturbed
// record, along with per-step deviations and bound values. The bound
// column follows the regime of the start point: shadow_bound with d0 = 0
// inside S(1 + t), the combined bound outside.
inline void shadow_orbit(const MobiusMap& g, OrbitRecord& rec) {
    if (rec.truncated()) {
        throw HypothesisViolated("cannot shadow a record that reached infinity");
    }
    if (rec.points.empty()) return;

    rec.shadow.clear();
    rec.deviation.clear();
    rec.bound.clear();
    rec.shadow.reserve(rec.points.size());
    rec.deviation.reserve(rec.points.size());
    rec.bound.reserve(rec.points.size());

    const HyperbolicProfile p = profile(g);
    const double t = rec.t > 0.0 ? rec.t : p.tau;
    const double delta = rec.delta > 0.0 ? rec.delta : default_delta(p.k);

    const bool contraction_regime = s_contains(p, 1.0 + t, rec.points.front());
    const double K = contraction_constant(t);
    std::optional<BoundSet> bs;
    if (!contraction_regime) bs = make_bound_set(p, delta, p.tau / 2.0);

    ExtendedComplex b = rec.points.front();
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
        if (i > 0) b = apply(g, b);
        rec.shadow.push_back(b);
        const ExtendedComplex& a = rec.points[i];
        double dev;
        if (a.is_infinity() || b.is_infinity()) {
            dev = (a == b) ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            dev = std::abs(a.value() - b.value());
        }
        rec.deviation.push_back(dev);
        rec.bound.push_back(contraction_regime ? shadow_bound(K, rec.eps, 0.0, i)
                                               : combined_bound(*bs, rec.eps, i));
    }
}

// Labels every point of the record with its stability regime.
inline void annotate_regions(const HyperbolicProfile& p, double delta, OrbitRecord& rec) {
    const AvoidedRegionW avoided(p.k, delta);
    rec.region.clear();
    rec.region.reserve(rec.points.size());
    for (const ExtendedComplex& a : rec.points) {
        OrbitRegion label = OrbitRegion::Escaped;
        if (avoided_z_contains(p, avoided, a)) {
            label = OrbitRegion::Avoided;
        } else if (s_contains(p, 1.0 + p.tau / 2.0, a)) {
            label = OrbitRegion::S;
        } else {
            const ExtendedComplex w = p.h_apply(a);
            if (!w.is_infinity() && escape_region_w_contains(p, delta, w.value())) {
                label = OrbitRegion::Exterior;
            }
        }
        rec.region.push_back(label);
    }
}

// Perturbed orbit of the dilation w -> k w, the conjugated model dynamics.
// RadialOutward pushes toward the repelling fixed point 0 here.
inline std::vector<Complex> perturbed_dilation_orbit(double k, Complex w0, std::size_t n,
                                                     const PerturbationModel& model) {
    std::vector<Complex> points;
    points.reserve(n + 1);
    points.push_back(w0);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex image = k * points.back();
        Complex eta;
        if (model.kind == PerturbationKind::RadialOutward) {
            const double len = std::abs(image);
            eta = len == 0.0 ? Complex(-model.eps, 0.0) : -model.eps * image / len;
        } else {
            eta = detail::draw_eta(model, i, image, nullptr);
        }
        points.push_back(image + eta);
    }
    return points;
}

// First index s such that the orbit stays strictly outside the closure of
// E_f from s on (within the simulated horizon); -1 if it never does.
inline long empirical_escape_step(const HyperbolicProfile& p, double delta,
                                  const std::vector<Complex>& w_orbit) {
    const DiskSpec disk = image_circle_tau_half(p);
    const double ball = p.k * delta / (p.k - 1.0);
    auto in_closure = [&](Complex w) {
        return std::abs(w - disk.center) <= disk.radius && std::abs(w) >= ball;
    };
    long step = -1;
    for (std::size_t i = 0; i < w_orbit.size(); ++i) {
        if (in_closure(w_orbit[i])) {
            step = -1;
        } else if (step < 0) {
            step = static_cast<long>(i);
        }
    }
    return step;
}

} // namespace moebius
