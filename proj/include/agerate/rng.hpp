#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace agerate {

/// Counter-based 64-bit generator (SplitMix64, Steele et al. 2014).
///
/// The integer stream is a pure function of (seed, call index), so cohorts
/// and training runs are reproducible bit-for-bit across platforms and can
/// be re-derived by any language with 64-bit integer arithmetic.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Derive an independent stream keyed by `stream_id` (one mixing round of
    /// the base seed against the id; streams do not overlap in practice).
    SplitMix64 derive(std::uint64_t stream_id) const {
        SplitMix64 mixer(state_ ^ (0xD1B54A32D192ED03ULL * (stream_id + 1)));
        return SplitMix64(mixer.next_u64());
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair,
    /// caching the second deviate.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_double_open();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    /// Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
    std::uint64_t bounded(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Fisher-Yates; spelled out so shuffles do not depend on the standard
    /// library's unspecified std::shuffle algorithm.
    template <typename T> void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace agerate
