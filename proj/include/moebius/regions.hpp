#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "moebius/errors.hpp"
#include "moebius/hyperbolic.hpp"
#include "moebius/tolerances.hpp"

namespace moebius {

enum class DiskSense { Interior, Exterior, Boundary };

// A circle in either plane, with a side-of-boundary tag.
struct DiskSpec {
    Complex center{};
    double radius = 0.0;
    DiskSense sense = DiskSense::Boundary;
};

// S(r) = { z in C : |z + d/c| > r/|c| }, the open exterior of the disk of
// radius r/|c| around the pole. Infinity is not a member.
inline bool s_contains(const HyperbolicProfile& p, double r, const ExtendedComplex& z) {
    if (z.is_infinity()) return false;
    return std::abs(z.value() - p.pole()) > r / std::abs(p.g.c);
}

// T(r) = { z in C : |z - a/c| < 1/(r|c|) }, the open disk around g(inf).
inline bool t_contains(const HyperbolicProfile& p, double r, const ExtendedComplex& z) {
    if (z.is_infinity()) return false;
    return std::abs(z.value() - p.g.a / p.g.c) < 1.0 / (r * std::abs(p.g.c));
}

// Distance by which the closed T(r) clears the boundary of S(r):
// tr/|c| minus the two radii. Positive return certifies that the closure
// of T(r) sits inside S(r); requires the hypothesis r + 1/r < tr.
inline double closure_nesting_margin(const HyperbolicProfile& p, double r) {
    if (!(r > 0.0)) throw HypothesisViolated("nesting margin needs r > 0");
    const double tr = p.trace();
    if (!(r + 1.0 / r < tr)) {
        throw HypothesisViolated("nesting hypothesis r + 1/r < tr violated");
    }
    const double ac = std::abs(p.g.c);
    return tr / ac - 1.0 / (r * ac) - r / ac;
}

// h(dS(1/sqrt k)) = { w : |w - 1/(k+1)| = 1/(k+1) }, the circle through 0
// and 2/(k+1).
inline DiskSpec image_circle_sqrtk(const HyperbolicProfile& p) {
    const double c = 1.0 / (p.k + 1.0);
    return DiskSpec{Complex(c, 0.0), c, DiskSense::Boundary};
}

// h(dS(1 + tau/2)) = { w : |w - (y-1)/2| = (y+1)/2 } with y = (k+3)/(3k+1);
// the circle through -1 and y, contained in the closed unit disk.
inline DiskSpec image_circle_tau_half(const HyperbolicProfile& p) {
    const double y = (p.k + 3.0) / (3.0 * p.k + 1.0);
    return DiskSpec{Complex((y - 1.0) / 2.0, 0.0), (y + 1.0) / 2.0, DiskSense::Boundary};
}

// The three-piece avoided region in dilation coordinates, all pieces closed:
//   R1 = { |w| <= t1 d/(k-1) } n { Re w <= 0 }         (half disk at 0)
//   R2 = { |Im w| <= t2 d/(k-1) } n { 0 <= Re w <= 1/k } (strip over [0, 1/k])
//   R3 = { |w - 1/k| <= t3 d/(k-1) } n { Re w >= 1/k }  (half disk at 1/k)
// Valid for delta < (1 - 1/k)^2. Default widths t1 = k, t2 = t3 = 1.
struct AvoidedRegionW {
    double k = 0.0;
    double delta = 0.0;
    double t1 = 1.0, t2 = 1.0, t3 = 1.0;

    AvoidedRegionW(double k_, double delta_, double t1_, double t2_, double t3_)
        : k(k_), delta(delta_), t1(t1_), t2(t2_), t3(t3_) {
        if (!(k > 1.0)) throw NotHyperbolic("avoided region needs k > 1");
        const double gate = (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
        if (!(delta > 0.0) || !(delta < gate)) {
            throw DeltaTooLarge("avoided region needs 0 < delta < (1 - 1/k)^2");
        }
        if (!(t1 >= 1.0 && t2 >= 1.0 && t3 >= 1.0)) {
            throw HypothesisViolated("avoided region widths must be >= 1");
        }
    }

    AvoidedRegionW(double k_, double delta_) : AvoidedRegionW(k_, delta_, k_, 1.0, 1.0) {}

    double band(double t) const { return t * delta / (k - 1.0); }

    bool in_r1(Complex w) const {
        return std::abs(w) <= band(t1) && w.real() <= 0.0;
    }
    bool in_r2(Complex w) const {
        return std::abs(w.imag()) <= band(t2) && w.real() >= 0.0 && w.real() <= 1.0 / k;
    }
    bool in_r3(Complex w) const {
        return std::abs(w - Complex(1.0 / k, 0.0)) <= band(t3) && w.real() >= 1.0 / k;
    }
};

inline bool avoided_w_contains(const AvoidedRegionW& r, Complex w) {
    return r.in_r1(w) || r.in_r2(w) || r.in_r3(w);
}

// Membership in R_g(inf) = h^-1(R^t): pull z through h. h(alpha) = inf is
// never a member; the pole always is (h(-d/c) = 1/k lands on R2's segment).
inline bool avoided_z_contains(const HyperbolicProfile& p, const AvoidedRegionW& r,
                               const ExtendedComplex& z) {
    const ExtendedComplex w = p.h_apply(z);
    if (w.is_infinity()) return false;
    return avoided_w_contains(r, w.value());
}

// n equally spaced points of the circle.
inline std::vector<Complex> sample_boundary(const DiskSpec& spec, std::size_t n) {
    if (n < 3) throw HypothesisViolated("boundary sampling needs n >= 3");
    std::vector<Complex> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = 6.283185307179586476925286766559 * static_cast<double>(j) /
                          static_cast<double>(n);
        out.push_back(spec.center + std::polar(spec.radius, th));
    }
    return out;
}

namespace detail {

// eps~ = k^2 delta |alpha - beta| / (k-1)^3, without the containment check.
inline double epsilon_tilde_raw(const HyperbolicProfile& p, double delta) {
    const double k = p.k;
    if (!(delta > 0.0) || !(delta < (k - 1.0) * (k - 1.0) / k)) {
        throw DeltaTooLarge("epsilon_tilde needs 0 < delta < (k-1)^2/k");
    }
    return k * k * delta * std::abs(p.alpha - p.beta) /
           ((k - 1.0) * (k - 1.0) * (k - 1.0));
}

} // namespace detail

// Radius of the disk around the pole that lies inside the avoided region:
// eps~ = k^2 delta |alpha - beta| / (k-1)^3. The containment is verified by
// sampling; the h-image of the pole disk overshoots the strip band by the
// factor (k-1)^4 / ((k-1)^4 - k^2 delta^2), so for delta large enough that
// this second-order excess beats the 0.1% sampling shrink the check throws
// CrossCheckFailed rather than certify a radius the region cannot hold.
inline double epsilon_tilde(const HyperbolicProfile& p, double delta) {
    const double k = p.k;
    const double eps = detail::epsilon_tilde_raw(p, delta);
    const double region_gate = (1.0 - 1.0 / k) * (1.0 - 1.0 / k);
    if (delta < region_gate) {
        const AvoidedRegionW region(k, delta);
        const DiskSpec disk{p.pole(), 0.999 * eps, DiskSense::Boundary};
        for (const Complex& z : sample_boundary(disk, 32)) {
            if (!avoided_z_contains(p, region, ExtendedComplex(z))) {
                throw CrossCheckFailed("epsilon_tilde disk leaks out of the avoided region");
            }
        }
    }
    return eps;
}

// E_f = h(closed complement of S(1 + tau/2)) minus the open ball
// B(0, k delta/(k-1)): the annular zone every delta-perturbed dilation
// orbit provably leaves.
inline bool escape_region_w_contains(const HyperbolicProfile& p, double delta, Complex w) {
    if (!(delta > 0.0)) throw DeltaTooLarge("escape region needs delta > 0");
    const DiskSpec disk = image_circle_tau_half(p);
    if (std::abs(w - disk.center) > disk.radius) return false;
    return std::abs(w) > p.k * delta / (p.k - 1.0);
}

// Membership survey over a fixed sample set.
struct RegionReport {
    std::string id;
    std::size_t sample_count = 0;
    std::size_t member_count = 0;
    std::vector<Complex> witnesses;  // up to 10 members
};

template <typename Predicate>
RegionReport survey_region(std::string id, Predicate&& contains,
                           const std::vector<Complex>& samples) {
    RegionReport report;
    report.id = std::move(id);
    report.sample_count = samples.size();
    for (const Complex& z : samples) {
        if (contains(z)) {
            ++report.member_count;
            if (report.witnesses.size() < 10) report.witnesses.push_back(z);
        }
    }
    return report;
}

} // namespace moebius
