#pragma once

#include <cstdlib>

namespace moebius {

// MOEBIUS_HUS_TOLERANCE_SCALE multiplies every residual tolerance in this
// library (cross-checks and verification suites). Debugging aid only;
// acceptance runs leave it unset.
inline double tolerance_scale() {
    static const double scale = [] {
        const char* env = std::getenv("MOEBIUS_HUS_TOLERANCE_SCALE");
        if (!env) return 1.0;
        const double v = std::atof(env);
        return v > 0.0 ? v : 1.0;
    }();
    return scale;
}

// Shorthand for a scaled tolerance.
inline double scaled_tol(double base) { return base * tolerance_scale(); }

} // namespace moebius
