#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "moebius/errors.hpp"
#include "moebius/extended_plane.hpp"

namespace moebius {

// Trace is considered real when |Im tr| is below this.
inline constexpr double kTraceTol = 1e-9;
// Real traces with |tr| <= 2 + margin are rejected as non-hyperbolic:
// every downstream constant degenerates as the multiplier approaches 1.
inline constexpr double kHyperbolicMargin = 1e-6;
// normalize() refuses coefficients whose determinant is below this.
inline constexpr double kDegenerateDetTol = 1e-14;

enum class MapClass {
    HyperbolicRealTrace,
    NonHyperbolic,
    DegenerateConstant,
};

inline const char* to_string(MapClass c) {
    switch (c) {
        case MapClass::HyperbolicRealTrace: return "HyperbolicRealTrace";
        case MapClass::NonHyperbolic: return "NonHyperbolic";
        case MapClass::DegenerateConstant: return "DegenerateConstant";
    }
    return "?";
}

// z -> (az + b)/(cz + d) with ad - bc = 1. Kept normalized at all times;
// construct through normalize().
struct MobiusMap {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Complex trace() const { return a + d; }
    Complex det() const { return a * d - b * c; }

    static MobiusMap identity() { return MobiusMap{}; }
};

namespace detail {

// Principal square root: branch cut on the negative real axis, result with
// nonnegative real part, positive imaginary part for negative real input.
// Signed zeros in the imaginary part are canonicalized first so the result
// does not depend on how a real-valued determinant was computed.
inline Complex principal_sqrt(Complex z) {
    if (z.imag() == 0.0) {
        if (z.real() >= 0.0) return Complex(std::sqrt(z.real()), 0.0);
        return Complex(0.0, std::sqrt(-z.real()));
    }
    return std::sqrt(z);
}

} // namespace detail

// Scales coefficients to determinant 1 (principal root), then flips the
// overall sign when that leaves a real trace negative, so real-trace maps
// always carry Re(tr) >= 0.
inline MobiusMap normalize(Complex a_raw, Complex b_raw, Complex c_raw, Complex d_raw) {
    const Complex det = a_raw * d_raw - b_raw * c_raw;
    if (std::abs(det) <= kDegenerateDetTol) {
        throw DegenerateMap("determinant too small: |ad - bc| = " + std::to_string(std::abs(det)));
    }
    const Complex s = detail::principal_sqrt(det);
    MobiusMap g{a_raw / s, b_raw / s, c_raw / s, d_raw / s};
    const Complex tr = g.trace();
    if (std::abs(tr.imag()) <= kTraceTol && tr.real() < 0.0) {
        g = MobiusMap{-g.a, -g.b, -g.c, -g.d};
    }
    return g;
}

inline MobiusMap normalize(const MobiusMap& g) { return normalize(g.a, g.b, g.c, g.d); }

inline MapClass classify(const MobiusMap& g) {
    const Complex tr = g.trace();
    if (std::abs(tr.imag()) <= kTraceTol && std::abs(tr.real()) > 2.0 + kHyperbolicMargin) {
        return MapClass::HyperbolicRealTrace;
    }
    return MapClass::NonHyperbolic;
}

inline bool is_linear(const MobiusMap& g) { return g.c == Complex(0.0, 0.0); }

// Pole -d/c, the preimage of infinity. Requires c != 0.
inline Complex pole(const MobiusMap& g) {
    if (is_linear(g)) throw LinearMap("linear map has no finite pole");
    return -g.d / g.c;
}

// Total on the sphere: g(inf) = a/c, g(-d/c) = inf; a linear map fixes inf.
inline ExtendedComplex apply(const MobiusMap& g, const ExtendedComplex& z) {
    if (z.is_infinity()) {
        if (is_linear(g)) return ExtendedComplex::infinity();
        return ExtendedComplex(g.a / g.c);
    }
    const Complex num = g.a * z.value() + g.b;
    const Complex den = g.c * z.value() + g.d;
    if (std::abs(den) == 0.0) return ExtendedComplex::infinity();
    return ExtendedComplex(num / den);
}

inline MobiusMap compose(const MobiusMap& g1, const MobiusMap& g2) {
    return normalize(g1.a * g2.a + g1.b * g2.c,
                     g1.a * g2.b + g1.b * g2.d,
                     g1.c * g2.a + g1.d * g2.c,
                     g1.c * g2.b + g1.d * g2.d);
}

// Adjugate of a determinant-1 matrix.
inline MobiusMap inverse(const MobiusMap& g) {
    return normalize(g.d, -g.b, -g.c, g.a);
}

// g'(z) = 1/(cz + d)^2 at finite z away from the pole.
inline Complex derivative(const MobiusMap& g, const ExtendedComplex& z) {
    if (z.is_infinity()) throw UnsupportedAtInfinity("derivative at infinity");
    if (!is_linear(g) && std::abs(z.value() - pole(g)) < 1e-12) {
        throw PoleAtPoint("derivative at the pole -d/c");
    }
    const Complex den = g.c * z.value() + g.d;
    return 1.0 / (den * den);
}

// Named preset maps.
inline MobiusMap preset_golden() { return normalize(2.0, 1.0, 1.0, 1.0); }

// Pielou logistic map F(z) = A z / (C z + 1), hyperbolic for A > 1, C > 0.
inline MobiusMap preset_pielou(double A, double C) {
    if (!(A > 1.0) || !(C > 0.0)) {
        throw HypothesisViolated("pielou preset needs A > 1 and C > 0");
    }
    return normalize(A, 0.0, C, 1.0);
}

} // namespace moebius
