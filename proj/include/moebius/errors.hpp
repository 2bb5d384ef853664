#pragma once

#include <stdexcept>
#include <string>

namespace moebius {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// normalize() was given coefficients with |ad - bc| below threshold.
struct DegenerateMap : Error {
    using Error::Error;
};

// An operation that needs a real trace with |tr| > 2 got something else.
struct NotHyperbolic : Error {
    using Error::Error;
};

// c == 0: the map fixes infinity and has no pole in the plane.
struct LinearMap : Error {
    using Error::Error;
};

// derivative() evaluated at (or too close to) the pole -d/c.
struct PoleAtPoint : Error {
    using Error::Error;
};

// derivative() evaluated at the point at infinity.
struct UnsupportedAtInfinity : Error {
    using Error::Error;
};

// A closed-form image formula was asked for a parameter that maps to infinity.
struct MapsToInfinity : Error {
    using Error::Error;
};

// h o g o h^-1 failed to match the expected dilation numerically.
struct ConjugationMismatch : Error {
    using Error::Error;
};

// delta exceeds the gate required by the bound being evaluated.
struct DeltaTooLarge : Error {
    using Error::Error;
};

// A lemma hypothesis (e.g. r + 1/r < tr) does not hold for the inputs.
struct HypothesisViolated : Error {
    using Error::Error;
};

// verify::run_suite got a suite name it does not know.
struct UnknownSuite : Error {
    using Error::Error;
};

// Circle-fit oracle: a boundary sample sits on the pole, image is a line.
struct ImageIsLine : Error {
    using Error::Error;
};

// An internal closed-form vs. direct-evaluation cross-check failed.
struct CrossCheckFailed : Error {
    using Error::Error;
};

} // namespace moebius
