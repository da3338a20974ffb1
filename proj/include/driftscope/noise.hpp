#pragma once

#include <cstdint>
#include <string>

#include "driftscope/image.hpp"

namespace driftscope {

enum class NoiseKind { Gaussian, Speckle, SaltPepper };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);  // "gaussian" | "speckle" | "sp"

/// One noise application: a kind, the parameters that kind uses, and a seed.
/// Fields outside the kind are ignored. `proportion` defaults to 0.5 (equal
/// salt and pepper), the usual default when only an amount is given.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double mean = 0.0;        // Gaussian, Speckle
    double variance = 0.0;    // Gaussian, Speckle
    double amount = 0.0;      // SaltPepper: fraction of elements replaced
    double proportion = 0.5;  // SaltPepper: salt share of the replacements
    std::uint64_t seed = 0;

    /// Throws ValueError when the parameters for the kind are out of range.
    void validate() const;
};

/// out[p] = clamp(img[p] + n_p, 0, 1) with n_p ~ Normal(mean, variance),
/// one draw per element in channel-major then row-major order. Equal
/// (img, mean, variance, seed) give bit-identical outputs.
Image apply_gaussian(const Image& img, double mean, double variance, std::uint64_t seed);

/// out[p] = clamp(img[p] + n_p * img[p], 0, 1); draws as in apply_gaussian.
/// The all-zero image is a fixed point for every parameter choice.
Image apply_speckle(const Image& img, double mean, double variance, std::uint64_t seed);

/// Replaces exactly k = round-half-up(amount * element_count) elements,
/// chosen uniformly without replacement (partial Fisher-Yates over the
/// element indices). Each chosen element becomes 1.0 with probability
/// `proportion`, else 0.0, with the coin flips drawn in selection order
/// after the selection draws.
Image apply_salt_pepper(const Image& img, double amount, double proportion, std::uint64_t seed);

/// Dispatches to the operation matching spec.kind with spec.seed.
Image apply(const Image& img, const NoiseSpec& spec);

}  // namespace driftscope
