#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace moebius {

using Complex = std::complex<double>;

// Any finite value whose modulus exceeds this is treated as the point at
// infinity. Far above every region scale that occurs here, far below
// overflow, so chordal arithmetic never produces non-finite components.
inline constexpr double kInfinitySnapRadius = 1e150;

// A point of the Riemann sphere: a finite complex value or the point at
// infinity. Plain value type, safe to copy and share.
class ExtendedComplex {
public:
    ExtendedComplex() : value_(0.0, 0.0), infinite_(false) {}

    // Finite constructor; snaps overflowing or non-finite input to infinity.
    ExtendedComplex(Complex z) : value_(z), infinite_(false) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            std::abs(z) > kInfinitySnapRadius) {
            value_ = Complex(0.0, 0.0);
            infinite_ = true;
        }
    }

    ExtendedComplex(double re, double im = 0.0) : ExtendedComplex(Complex(re, im)) {}

    static ExtendedComplex infinity() {
        ExtendedComplex p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinity() const { return infinite_; }

    // Only meaningful for finite points; infinity stores (0, 0).
    Complex value() const { return value_; }

    friend bool operator==(const ExtendedComplex& p, const ExtendedComplex& q) {
        if (p.infinite_ || q.infinite_) return p.infinite_ && q.infinite_;
        return p.value_ == q.value_;
    }

    friend bool operator!=(const ExtendedComplex& p, const ExtendedComplex& q) {
        return !(p == q);
    }

private:
    Complex value_;
    bool infinite_;
};

// Chordal metric on the sphere: d(z, w) = 2|z - w| / sqrt((1+|z|^2)(1+|w|^2)),
// d(z, inf) = 2 / sqrt(1+|z|^2). Range [0, 2]; infinity is an ordinary point.
inline double chordal_distance(const ExtendedComplex& p, const ExtendedComplex& q) {
    if (p.is_infinity() && q.is_infinity()) return 0.0;
    if (p.is_infinity()) return 2.0 / std::hypot(1.0, std::abs(q.value()));
    if (q.is_infinity()) return 2.0 / std::hypot(1.0, std::abs(p.value()));
    const double num = 2.0 * std::abs(p.value() - q.value());
    return num / (std::hypot(1.0, std::abs(p.value())) * std::hypot(1.0, std::abs(q.value())));
}

inline bool approx_eq(const ExtendedComplex& p, const ExtendedComplex& q, double tol) {
    return chordal_distance(p, q) <= tol;
}

} // namespace moebius
