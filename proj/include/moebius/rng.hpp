#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace moebius {

namespace detail {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// splitmix64 stream. Streams derived from (seed, index) pairs are
// independent of the order they are consumed in, which is what keeps
// multi-trial runs bit-reproducible under any scheduling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Stream for sub-entity `index` of entity `seed` (trial of a suite,
    // step of an orbit). Mixes both inputs before use so adjacent seeds
    // do not produce overlapping streams.
    static SplitMix64 derived(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t a = detail::splitmix64_step(s);
        s = a ^ (index + 0x632be59bd9b4e019ULL);
        std::uint64_t b = detail::splitmix64_step(s);
        return SplitMix64(b);
    }

    std::uint64_t next_u64() { return detail::splitmix64_step(state_); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform angle in [0, 2*pi).
    double next_angle() { return next_double() * 6.283185307179586476925286766559; }

    // Area-uniform draw from the disk |z - center| < radius.
    std::complex<double> next_in_disk(std::complex<double> center, double radius) {
        const double r = radius * std::sqrt(next_double());
        const double th = next_angle();
        return center + std::polar(r, th);
    }

private:
    std::uint64_t state_;
};

} // namespace moebius
