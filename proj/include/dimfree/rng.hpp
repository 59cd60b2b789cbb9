#ifndef DIMFREE_RNG_HPP
#define DIMFREE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace dimfree {

using Engine = std::mt19937_64;

// Engine keyed by (seed, stream, index) so any draw can be regenerated independently.
inline Engine keyed_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Engine(seq);
}

// The standard distributions are implementation-defined; these are fixed formulas.
inline double uniform01(Engine& e) {
    return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(Engine& e) { return 2.0 * uniform01(e) - 1.0; }

inline double rademacher(Engine& e) { return (e() >> 63) ? 1.0 : -1.0; }

// Marsaglia polar method; the spare value is discarded to keep draws stateless.
inline double std_normal(Engine& e) {
    for (;;) {
        double u = uniform_pm1(e), v = uniform_pm1(e);
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Engine& e, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        std::uint64_t r = e();
        if (r < limit) return r % n;
    }
}

} // namespace dimfree

#endif
