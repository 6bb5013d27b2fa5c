#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

namespace gslaser {

/// Independent standard-normal draws consumed by one stochastic step,
/// in the fixed order (a, b, c) = (zeta^A, zeta^B, zeta^C).
struct NormalTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

namespace rng_detail {

// SplitMix64 finalizer (Stafford mix13).
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

} // namespace rng_detail

/**
 * Deterministic per-trajectory random stream.
 *
 * The stream is keyed by (master_seed, stream_index): the xoshiro256++
 * state is derived from the key alone, so any trajectory can be generated
 * on any thread, in any order, with bit-identical output. Gaussian deviates
 * use the Marsaglia polar transform: draw (u, v) uniform on [-1,1)^2 until
 * 0 < s = u^2 + v^2 < 1, then
 *
 *   z1 = u sqrt(-2 ln s / s),  z2 = v sqrt(-2 ln s / s),
 *
 * which has exact standard-normal marginals and independent components.
 * Uniforms are consumed strictly in stream order, two per rejection trial;
 * one triple() call takes two accepted pairs and yields
 * (zeta^A, zeta^B, zeta^C) = (z1, z2, z1') in that order, discarding z2'.
 */
class GaussianStream {
public:
    GaussianStream(uint64_t master_seed, uint64_t stream_index) {
        using namespace rng_detail;
        uint64_t key = mix64(master_seed + kGolden) ^ mix64(stream_index + 0xD1B54A32D192ED03ull);
        // Expand the key into the xoshiro256++ state with a SplitMix64 run.
        for (auto& word : s_) {
            key += kGolden;
            word = mix64(key);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
            s_[0] = kGolden; // all-zero state is the one forbidden xoshiro state
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; keeps log() finite in the Box-Muller transform.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    std::pair<double, double> normal_pair() {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double f = std::sqrt(-2.0 * std::log(s) / s);
                return {u * f, v * f};
            }
        }
    }

    double normal() { return normal_pair().first; }

    /// One step's worth of deviates; consumes two normal pairs, the fourth
    /// deviate is discarded.
    NormalTriple triple() {
        const auto [za, zb] = normal_pair();
        const auto [zc, unused] = normal_pair();
        (void)unused;
        return NormalTriple{za, zb, zc};
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

} // namespace gslaser
