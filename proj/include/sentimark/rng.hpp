#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace sentimark {

// SplitMix64. The constants are the published ones, so the stream is a pure
// function of (seed, call sequence) on every platform and in any language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n), n >= 1. Multiply-shift with rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            auto wide = static_cast<unsigned __int128>(next_u64()) * n;
            if (static_cast<std::uint64_t>(wide) >= threshold)
                return static_cast<std::uint64_t>(wide >> 64);
        }
    }

    // Standard normal, Box-Muller cosine branch. Consumes exactly two draws
    // per call; no cached spare, so the stream position stays predictable.
    double normal() {
        constexpr double two_pi = 6.283185307179586476925286766559;
        double u1;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

} // namespace sentimark
