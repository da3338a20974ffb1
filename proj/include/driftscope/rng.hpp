#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace driftscope {

/// splitmix64 finalizer; used only to mix seeds, never as the draw stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for item `index` of a run keyed by `base`:
///   seed_i = splitmix64(splitmix64(base) ^ splitmix64(index + 1))
/// Corpus runs use the image's position in the sorted path list as `index`,
/// sweeps the flattened grid index, so per-item streams are independent and
/// worker scheduling cannot change results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 1));
}

/// Seeded draw source for the noise operations.
///
/// The engine is std::mt19937_64, whose word sequence is pinned by the
/// standard. Words map to doubles through fixed 53-bit shifts rather than
/// the library distributions, and normal variates use the Box-Muller
/// transform with the sine half cached, so a given seed replays the same
/// draw sequence on every run of this implementation. Bit-equality across
/// implementations of the transcendental functions is not promised.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double next_open_unit() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    /// Normal with the given mean and standard deviation (Box-Muller).
    double normal(double mean, double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + stddev * (radius * std::cos(angle));
    }

    /// Uniform integer in [0, n); n must be positive. Rejection on the top
    /// band keeps the draw unbiased.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    static constexpr double kPi = 3.14159265358979323846264338327950288;

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace driftscope
