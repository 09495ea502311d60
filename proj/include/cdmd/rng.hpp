#pragma once

#include <cstdint>
#include <random>

// Deterministic random streams. mt19937_64 raw output is bit-specified by the
// standard; the uniform->double conversion and the Box-Muller transform are
// spelled out here instead of using std::*_distribution, whose streams differ
// between standard libraries. Same seed, same bytes, on any toolchain.

namespace cdmd {

/// splitmix64 step, used to derive independent stream seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for sub-stream (a, b) of `base`. Streams with distinct (a, b) are
/// decorrelated; the derivation is order-free so parallel consumers agree
/// with the serial reference.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = base;
    s ^= splitmix64(a) + 0x9e3779b97f4a7c15ULL;
    std::uint64_t t = s + b;
    return splitmix64(t);
}

/// Standard-normal stream: Box-Muller over mt19937_64.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // 53-bit mantissa uniforms; u1 shifted away from 0 for the log.
        const double u1 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cdmd
