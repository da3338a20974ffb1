#include "driftscope/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "driftscope/error.hpp"
#include "driftscope/rng.hpp"

namespace driftscope {

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::Speckle: return "speckle";
        case NoiseKind::SaltPepper: return "sp";
    }
    throw InternalError("unknown noise kind");
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "gaussian") return NoiseKind::Gaussian;
    if (name == "speckle") return NoiseKind::Speckle;
    if (name == "sp") return NoiseKind::SaltPepper;
    throw ValueError("unknown noise kind '" + name + "' (expected gaussian, speckle, or sp)");
}

void NoiseSpec::validate() const {
    switch (kind) {
        case NoiseKind::Gaussian:
        case NoiseKind::Speckle:
            if (!(variance >= 0.0)) {
                throw ValueError("noise variance must be >= 0");
            }
            if (!std::isfinite(mean)) {
                throw ValueError("noise mean must be finite");
            }
            break;
        case NoiseKind::SaltPepper:
            if (!(amount >= 0.0 && amount <= 1.0)) {
                throw ValueError("salt-and-pepper amount must be in [0, 1]");
            }
            if (!(proportion >= 0.0 && proportion <= 1.0)) {
                throw ValueError("salt proportion must be in [0, 1]");
            }
            break;
    }
}

Image apply_gaussian(const Image& img, double mean, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) {
        throw ValueError("noise variance must be >= 0");
    }
    if (!std::isfinite(mean)) {
        throw ValueError("noise mean must be finite");
    }
    Rng rng(seed);
    const double stddev = std::sqrt(variance);
    Image out = img;
    // Channel-major, then row-major: one draw per element, in storage order.
    for (auto& plane : out.planes) {
        for (double& v : plane) {
            v = std::clamp(v + rng.normal(mean, stddev), 0.0, 1.0);
        }
    }
    return out;
}

Image apply_speckle(const Image& img, double mean, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) {
        throw ValueError("noise variance must be >= 0");
    }
    if (!std::isfinite(mean)) {
        throw ValueError("noise mean must be finite");
    }
    Rng rng(seed);
    const double stddev = std::sqrt(variance);
    Image out = img;
    for (auto& plane : out.planes) {
        for (double& v : plane) {
            v = std::clamp(v + rng.normal(mean, stddev) * v, 0.0, 1.0);
        }
    }
    return out;
}

Image apply_salt_pepper(const Image& img, double amount, double proportion, std::uint64_t seed) {
    if (!(amount >= 0.0 && amount <= 1.0)) {
        throw ValueError("salt-and-pepper amount must be in [0, 1]");
    }
    if (!(proportion >= 0.0 && proportion <= 1.0)) {
        throw ValueError("salt proportion must be in [0, 1]");
    }
    Image out = img;
    const std::uint64_t elements = img.element_count();
    // Half-up rounding so e.g. 0.5 of 5 elements replaces 3.
    const auto replaced =
        static_cast<std::uint64_t>(std::floor(amount * static_cast<double>(elements) + 0.5));
    if (replaced == 0) {
        return out;
    }

    Rng rng(seed);
    std::vector<std::uint64_t> indices(elements);
    std::iota(indices.begin(), indices.end(), std::uint64_t{0});
    // Partial Fisher-Yates: after `replaced` swaps the leading slots hold a
    // uniform sample of element indices without replacement.
    for (std::uint64_t i = 0; i < replaced; ++i) {
        const std::uint64_t j = i + rng.bounded(elements - i);
        std::swap(indices[i], indices[j]);
    }
    const std::size_t pixels = img.pixel_count();
    for (std::uint64_t i = 0; i < replaced; ++i) {
        const std::uint64_t idx = indices[i];
        double& v = out.planes[idx / pixels][idx % pixels];
        v = rng.bernoulli(proportion) ? 1.0 : 0.0;
    }
    return out;
}

Image apply(const Image& img, const NoiseSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case NoiseKind::Gaussian:
            return apply_gaussian(img, spec.mean, spec.variance, spec.seed);
        case NoiseKind::Speckle:
            return apply_speckle(img, spec.mean, spec.variance, spec.seed);
        case NoiseKind::SaltPepper:
            return apply_salt_pepper(img, spec.amount, spec.proportion, spec.seed);
    }
    throw InternalError("unknown noise kind");
}

}  // namespace driftscope
